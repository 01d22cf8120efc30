// swd/decoder.cc

// Copyright 2026  swdecode authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "swd/decoder.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "json.hpp"
#include "swd/errors.h"

namespace swd {

namespace {

struct Token {
  double cost = 0.0;
  StateId state = kNoStateId;
  int32_t backpointer = -1;  // index into the token arena
  Label olabel = kEpsilon;
  Label ilabel = kEpsilon;   // non-epsilon iff this token consumed a frame
};

class Search {
 public:
  Search(const Wfst &graph, const Beam &beam) : graph_(graph), beam_(beam) {}

  void Init() {
    arena_.clear();
    active_.clear();
    arena_.push_back(Token{0.0, graph_.Start(), -1, kEpsilon, kEpsilon});
    active_[graph_.Start()] = 0;
    EpsilonClosure();
    Prune();
  }

  // Expands every active token over the emitting arcs of one frame.
  // `acoustic(label)` is the frame's acoustic cost for that input label.
  template <typename AcousticFn>
  void Step(const AcousticFn &acoustic) {
    std::unordered_map<StateId, int32_t> next;
    next.reserve(active_.size() * 2);
    for (const auto &[state, tok] : active_) {
      double base = arena_[tok].cost;
      for (const Arc &arc : graph_.Arcs(state)) {
        if (arc.ilabel == kEpsilon) continue;
        double cost = base + arc.weight.Value() + acoustic(arc.ilabel);
        auto it = next.find(arc.nextstate);
        if (it == next.end() || cost < arena_[it->second].cost) {
          arena_.push_back(Token{cost, arc.nextstate,
                                 static_cast<int32_t>(tok), arc.olabel,
                                 arc.ilabel});
          next[arc.nextstate] = static_cast<int32_t>(arena_.size()) - 1;
        }
      }
    }
    active_ = std::move(next);
    if (active_.empty()) {
      throw DecodeError(
          "no active tokens survive the frame; the beam may be too tight or "
          "the posterior does not match the graph");
    }
    EpsilonClosure();
    Prune();
  }

  // Cheapest token in a final state (final weight folded in), or the
  // cheapest token overall with `flagged` set.
  Token Best(bool *flagged) const {
    const Token *best_final = nullptr;
    double best_final_cost = std::numeric_limits<double>::infinity();
    const Token *best_any = nullptr;
    for (const auto &[state, tok] : active_) {
      const Token &t = arena_[tok];
      if (best_any == nullptr || t.cost < best_any->cost ||
          (t.cost == best_any->cost && t.state < best_any->state)) {
        best_any = &t;
      }
      if (graph_.IsFinal(state)) {
        double cost = t.cost + graph_.Final(state).Value();
        if (best_final == nullptr || cost < best_final_cost ||
            (cost == best_final_cost && t.state < best_final->state)) {
          best_final = &t;
          best_final_cost = cost;
        }
      }
    }
    if (best_final != nullptr) {
      *flagged = false;
      Token result = *best_final;
      result.cost = best_final_cost;
      return result;
    }
    *flagged = true;
    return *best_any;
  }

  // Backpointer traceback, oldest first.
  void Trace(const Token &token, std::vector<Label> *word_ids,
             std::vector<Label> *tokens) const {
    word_ids->clear();
    tokens->clear();
    // The final token may be a copy; walk from its backpointer chain
    // including its own labels.
    const Token *t = &token;
    while (true) {
      if (t->olabel != kEpsilon) word_ids->push_back(t->olabel);
      if (t->ilabel != kEpsilon) tokens->push_back(t->ilabel);
      if (t->backpointer < 0) break;
      t = &arena_[t->backpointer];
    }
    std::reverse(word_ids->begin(), word_ids->end());
    std::reverse(tokens->begin(), tokens->end());
  }

 private:
  // Cost-ordered relaxation over epsilon arcs; each state is re-expanded
  // only on a strict cost improvement, so zero-cost epsilon cycles
  // terminate.
  void EpsilonClosure() {
    using Entry = std::pair<double, StateId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    for (const auto &[state, tok] : active_) {
      queue.emplace(arena_[tok].cost, state);
    }
    while (!queue.empty()) {
      auto [cost, state] = queue.top();
      queue.pop();
      auto it = active_.find(state);
      if (it == active_.end() || arena_[it->second].cost < cost) continue;
      int32_t tok = it->second;
      for (const Arc &arc : graph_.Arcs(state)) {
        if (arc.ilabel != kEpsilon) continue;
        double next_cost = cost + arc.weight.Value();
        auto jt = active_.find(arc.nextstate);
        if (jt == active_.end() || next_cost < arena_[jt->second].cost) {
          arena_.push_back(Token{next_cost, arc.nextstate, tok, arc.olabel,
                                 kEpsilon});
          active_[arc.nextstate] = static_cast<int32_t>(arena_.size()) - 1;
          queue.emplace(next_cost, arc.nextstate);
        }
      }
    }
  }

  void Prune() {
    double best = std::numeric_limits<double>::infinity();
    for (const auto &[state, tok] : active_) {
      best = std::min(best, arena_[tok].cost);
    }
    const double threshold = best + beam_.beam_width;
    std::vector<std::pair<StateId, int32_t>> survivors;
    survivors.reserve(active_.size());
    for (const auto &[state, tok] : active_) {
      if (arena_[tok].cost <= threshold) survivors.emplace_back(state, tok);
    }
    if (static_cast<int64_t>(survivors.size()) > beam_.max_active) {
      std::sort(survivors.begin(), survivors.end(),
                [this](const auto &a, const auto &b) {
                  double ca = arena_[a.second].cost, cb = arena_[b.second].cost;
                  if (ca != cb) return ca < cb;
                  return a.first < b.first;
                });
      survivors.resize(beam_.max_active);
    }
    active_.clear();
    for (const auto &[state, tok] : survivors) active_[state] = tok;
  }

  const Wfst &graph_;
  Beam beam_;
  std::vector<Token> arena_;
  std::unordered_map<StateId, int32_t> active_;
};

DecodeResult RunSearch(const GraphBundle &bundle, const PosteriorMatrix &matrix,
                       const std::vector<int32_t> &frames, int32_t total_frames,
                       const Beam &beam, double ac_scale) {
  if (bundle.tlg.Empty()) {
    throw DecodeError("decoding graph is empty");
  }
  if (matrix.VocabSize() != bundle.token_syms.NumSymbols() - 1) {
    throw std::invalid_argument(
        "posterior vocabulary (" + std::to_string(matrix.VocabSize()) +
        ") does not match the graph token alphabet (" +
        std::to_string(bundle.token_syms.NumSymbols() - 1) + ")");
  }
  if (matrix.BlankId() != 0) {
    throw std::invalid_argument(
        "graph decoding expects blank at column 0 (token id 1 is <blk>)");
  }
  if (beam.beam_width <= 0 || beam.max_active < 1) {
    throw std::invalid_argument("beam_width must be > 0 and max_active >= 1");
  }

  auto t0 = std::chrono::steady_clock::now();
  Search search(bundle.tlg, beam);
  search.Init();
  for (int32_t frame : frames) {
    search.Step([&](Label ilabel) {
      return -ac_scale * static_cast<double>(matrix.Value(frame, ilabel - 1));
    });
  }
  DecodeResult result;
  Token best = search.Best(&result.flagged_nonfinal);
  result.total_cost = best.cost;
  search.Trace(best, &result.word_ids, &result.tokens);
  for (Label id : result.word_ids) {
    result.words.push_back(bundle.word_syms.Name(id));
  }
  result.frames_decoded = static_cast<int32_t>(frames.size());
  result.total_frames = total_frames;
  auto t1 = std::chrono::steady_clock::now();
  result.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return result;
}

}  // namespace

DecodeResult Decode(const GraphBundle &bundle, const PosteriorMatrix &matrix,
                    const FrameSelection &selection, const Beam &beam,
                    double ac_scale) {
  for (int32_t frame : selection.indices) {
    if (frame < 0 || frame >= matrix.NumFrames()) {
      throw std::invalid_argument("selection index " + std::to_string(frame) +
                                  " out of range for " +
                                  std::to_string(matrix.NumFrames()) + " frames");
    }
  }
  return RunSearch(bundle, matrix, selection.indices, matrix.NumFrames(), beam,
                   ac_scale);
}

DecodeResult Decode(const GraphBundle &bundle, const ReducedPosterior &reduced,
                    const Beam &beam, double ac_scale) {
  std::vector<int32_t> all(reduced.matrix.NumFrames());
  for (int32_t t = 0; t < reduced.matrix.NumFrames(); ++t) all[t] = t;
  int32_t total_frames = reduced.source_frames.empty()
                             ? reduced.matrix.NumFrames()
                             : reduced.source_frames.back().second;
  return RunSearch(bundle, reduced.matrix, all, total_frames, beam, ac_scale);
}

std::vector<int32_t> GreedyCtc(const PosteriorMatrix &matrix) {
  std::vector<int32_t> collapsed;
  int32_t prev = -1;
  for (int32_t t = 0; t < matrix.NumFrames(); ++t) {
    int32_t argmax = matrix.ArgmaxRow(t);
    if (argmax != prev && argmax != matrix.BlankId()) {
      collapsed.push_back(argmax);
    }
    prev = argmax;
  }
  return collapsed;
}

BatchResult DecodeBatch(const GraphBundle &bundle,
                        const std::vector<BatchItem> &utterances,
                        const Strategy &strategy, const Beam &beam,
                        double ac_scale, int32_t jobs) {
  BatchResult batch;
  batch.results.resize(utterances.size());
  batch.errors.resize(utterances.size());
  batch.utt_ids.reserve(utterances.size());
  for (const BatchItem &item : utterances) batch.utt_ids.push_back(item.utt_id);

  auto decode_one = [&](size_t i) {
    const PosteriorMatrix &matrix = utterances[i].matrix;
    try {
      auto t0 = std::chrono::steady_clock::now();
      DecodeResult result;
      if (strategy.kind == StrategyKind::kAverage) {
        result = Decode(bundle, ReduceAverage(matrix), beam, ac_scale);
      } else {
        result = Decode(bundle, matrix, SelectFrames(matrix, strategy), beam,
                        ac_scale);
      }
      auto t1 = std::chrono::steady_clock::now();
      result.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      batch.results[i] = std::move(result);
    } catch (const std::exception &e) {
      batch.errors[i] = e.what();
    }
  };

  auto b0 = std::chrono::steady_clock::now();
  if (jobs <= 1 || utterances.size() <= 1) {
    for (size_t i = 0; i < utterances.size(); ++i) decode_one(i);
  } else {
    std::atomic<size_t> next{0};
    size_t num_workers = std::min<size_t>(jobs, utterances.size());
    std::vector<std::thread> workers;
    workers.reserve(num_workers);
    for (size_t w = 0; w < num_workers; ++w) {
      workers.emplace_back([&]() {
        for (size_t i = next.fetch_add(1); i < utterances.size();
             i = next.fetch_add(1)) {
          decode_one(i);
        }
      });
    }
    for (auto &worker : workers) worker.join();
  }
  auto b1 = std::chrono::steady_clock::now();
  batch.elapsed_ms = std::chrono::duration<double, std::milli>(b1 - b0).count();
  for (size_t i = 0; i < utterances.size(); ++i) {
    if (batch.errors[i].empty()) batch.total_wall_ms += batch.results[i].wall_ms;
  }
  return batch;
}

void WriteResultsJsonl(const BatchResult &batch, std::ostream &out) {
  for (size_t i = 0; i < batch.results.size(); ++i) {
    nlohmann::json line;
    line["utt_id"] = batch.utt_ids[i];
    if (!batch.errors[i].empty()) {
      line["error"] = batch.errors[i];
      out << line.dump() << "\n";
      continue;
    }
    const DecodeResult &r = batch.results[i];
    line["words"] = r.words;
    std::string text;
    for (size_t k = 0; k < r.words.size(); ++k) {
      if (k) text += ' ';
      text += r.words[k];
    }
    line["text"] = text;
    line["total_cost"] = r.total_cost;
    line["frames_decoded"] = r.frames_decoded;
    line["total_frames"] = r.total_frames;
    line["wall_ms"] = r.wall_ms;
    line["flagged_nonfinal"] = r.flagged_nonfinal;
    out << line.dump() << "\n";
  }
}

}  // namespace swd
