// tests/test-decoder.cc

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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "swd/errors.h"
#include "swd/synth.h"
#include "testing-oracles.h"

using namespace swd;
using namespace swd::testing;

namespace {

const Beam kWideBeam{.beam_width = 1e9, .max_active = 1000000};

Lexicon OneWordLexicon() { return ParseLexiconString("hello\th i\n"); }

ArpaModel OneWordModel() {
  return ParseArpaString(
      "\\data\\\nngram 1=3\n\n\\1-grams:\n"
      "-99\t<s>\t0\n-0.2\t</s>\n-0.2\thello\t0\n\n\\end\\\n");
}

SynthConfig CleanConfig(uint64_t seed) {
  return {.vocab_size = 3,
          .blank_run_mean = 4.0,
          .spike_prob = 0.8,
          .neighbor_leak = 0.05,
          .noise_floor = 0.02,
          .seed = seed};
}

// Bundle whose graph is an arbitrary machine over `num_tokens` real tokens.
GraphBundle FakeBundle(Wfst graph, int32_t num_tokens, int32_t num_words) {
  GraphBundle bundle;
  bundle.tlg = std::move(graph);
  bundle.token_syms.AddSymbol("<eps>");
  bundle.token_syms.AddSymbol(kBlankSymbol);
  for (int32_t v = 2; v <= num_tokens; ++v) {
    bundle.token_syms.AddSymbol("t" + std::to_string(v));
  }
  bundle.word_syms.AddSymbol("<eps>");
  for (int32_t w = 1; w <= num_words; ++w) {
    bundle.word_syms.AddSymbol("word" + std::to_string(w));
  }
  return bundle;
}

PosteriorMatrix RandomAcoustics(std::mt19937_64 &rng, int32_t num_frames,
                                int32_t vocab) {
  PosteriorMatrix m(num_frames, vocab, 0);
  for (int32_t t = 0; t < num_frames; ++t) {
    std::vector<double> mass(vocab);
    double sum = 0.0;
    for (int32_t v = 0; v < vocab; ++v) {
      mass[v] = 0.05 + static_cast<double>(rng() % 1000) / 1000.0;
      sum += mass[v];
    }
    for (int32_t v = 0; v < vocab; ++v) {
      m.Set(t, v, static_cast<float>(std::log(mass[v] / sum)));
    }
  }
  return m;
}

}  // namespace

TEST_CASE("greedy ctc collapse") {
  PosteriorMatrix m(5, 4, 0);
  auto set_argmax = [&m](int32_t t, int32_t v) {
    for (int32_t k = 0; k < 4; ++k) m.Set(t, k, std::log(0.1f));
    m.Set(t, v, std::log(0.7f));
  };
  set_argmax(0, 0);  // blank
  set_argmax(1, 1);  // a
  set_argmax(2, 1);  // a
  set_argmax(3, 0);  // blank
  set_argmax(4, 2);  // c
  CHECK(GreedyCtc(m) == std::vector<int32_t>{1, 2});

  PosteriorMatrix blank(3, 4, 0);
  for (int32_t t = 0; t < 3; ++t) {
    for (int32_t k = 0; k < 4; ++k) blank.Set(t, k, std::log(k == 0 ? 0.7f : 0.1f));
  }
  CHECK(GreedyCtc(blank).empty());
}

TEST_CASE("greedy ctc agrees with the collapse oracle on random argmaxes") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 200; ++trial) {
    int32_t num_frames = static_cast<int32_t>(rng() % 12);
    PosteriorMatrix m(num_frames, 4, 0);
    std::vector<int32_t> argmaxes;
    for (int32_t t = 0; t < num_frames; ++t) {
      int32_t v = static_cast<int32_t>(rng() % 4);
      argmaxes.push_back(v);
      for (int32_t k = 0; k < 4; ++k) m.Set(t, k, std::log(k == v ? 0.7f : 0.1f));
    }
    CHECK(GreedyCtc(m) == CollapseOracle(argmaxes, 0));
  }
}

TEST_CASE("decode recovers a planted word") {
  GraphBundle bundle =
      BuildGraphBundle(OneWordLexicon(), OneWordModel(), BuildRecipe::kDetMin);
  auto corpus = GenerateCorpus(CleanConfig(5), {"hello"}, OneWordLexicon());
  const auto &utt = corpus[0];

  SUBCASE("dense selection decodes every frame") {
    DecodeResult result =
        Decode(bundle, utt.matrix, SelectDense(utt.matrix), kWideBeam);
    CHECK(result.words == std::vector<std::string>{"hello"});
    CHECK(result.frames_decoded == utt.matrix.NumFrames());
    CHECK(result.total_frames == utt.matrix.NumFrames());
    CHECK_FALSE(result.flagged_nonfinal);
    CHECK(std::isfinite(result.total_cost));
    CHECK(static_cast<int32_t>(result.tokens.size()) == result.frames_decoded);
  }
  SUBCASE("swd selection gives the same word within the frame bound") {
    auto selection =
        SelectSwd(utt.matrix, {.window_w = 1, .side = WindowSide::kBoth});
    DecodeResult result = Decode(bundle, utt.matrix, selection, kWideBeam);
    CHECK(result.words == std::vector<std::string>{"hello"});
    CHECK(result.frames_decoded <= 3 * selection.stats.spike_count);
    CHECK(result.frames_decoded < utt.matrix.NumFrames());
  }
  SUBCASE("averaging reduction also recovers the word") {
    DecodeResult result = Decode(bundle, ReduceAverage(utt.matrix), kWideBeam);
    CHECK(result.words == std::vector<std::string>{"hello"});
    CHECK(result.total_frames == utt.matrix.NumFrames());
    CHECK(result.frames_decoded < utt.matrix.NumFrames());
  }
}

TEST_CASE("decode with unbounded beam matches exhaustive search") {
  std::mt19937_64 rng(83);
  RandomFstOptions options;
  options.min_states = 2;
  options.max_states = 8;
  options.num_symbols = 3;  // ilabels 1..3 = blank + two tokens
  options.acceptor = false;
  options.eps_prob = 0.15;
  int finite_checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    Wfst graph = RandomAcyclicFst(rng, options);
    // Give the graph some cycles too: arcs back to the start.
    if (trial % 3 == 0 && graph.NumStates() >= 3) {
      graph.AddArc(graph.NumStates() - 1,
                   Arc(1 + static_cast<Label>(rng() % 3), kEpsilon,
                       Weight(0.5), 0));
    }
    GraphBundle bundle = FakeBundle(graph, 3, 5);
    int32_t num_frames = static_cast<int32_t>(rng() % 6) + 1;
    PosteriorMatrix m = RandomAcoustics(rng, num_frames, 3);

    double oracle = ExhaustiveDecodeCost(
        bundle.tlg, num_frames, [&](int32_t k, Label ilabel) {
          return -static_cast<double>(m.Value(k, ilabel - 1));
        });
    FrameSelection dense = SelectDense(m);
    if (std::isinf(oracle)) {
      // No complete path: the decoder must flag or fail, never invent one.
      try {
        DecodeResult result = Decode(bundle, m, dense, kWideBeam);
        CHECK(result.flagged_nonfinal);
      } catch (const DecodeError &) {
        CHECK(true);
      }
    } else {
      DecodeResult result = Decode(bundle, m, dense, kWideBeam);
      REQUIRE_FALSE(result.flagged_nonfinal);
      CHECK(result.total_cost == doctest::Approx(oracle).epsilon(1e-9));
      ++finite_checked;
    }
  }
  CHECK(finite_checked > 40);
}

TEST_CASE("decode errors") {
  GraphBundle bundle =
      BuildGraphBundle(OneWordLexicon(), OneWordModel(), BuildRecipe::kDetMin);
  auto corpus = GenerateCorpus(CleanConfig(7), {"hello"}, OneWordLexicon());
  const auto &utt = corpus[0];

  SUBCASE("vocabulary mismatch is a contract error") {
    PosteriorMatrix wrong(4, 9, 0);
    CHECK_THROWS_AS(Decode(bundle, wrong, SelectDense(wrong), kWideBeam),
                    std::invalid_argument);
  }
  SUBCASE("selection out of range is a contract error") {
    FrameSelection bad = SelectDense(utt.matrix);
    bad.indices.push_back(utt.matrix.NumFrames() + 5);
    CHECK_THROWS_AS(Decode(bundle, utt.matrix, bad, kWideBeam),
                    std::invalid_argument);
  }
  SUBCASE("a graph with no emitting arcs empties the beam") {
    Wfst graph;
    graph.AddStates(2);
    graph.SetStart(0);
    graph.AddArc(0, Arc(kEpsilon, kEpsilon, Weight::One(), 1));
    graph.SetFinal(1, Weight::One());
    GraphBundle eps_bundle = FakeBundle(std::move(graph), 2, 1);
    std::mt19937_64 rng(1);
    PosteriorMatrix m = RandomAcoustics(rng, 2, 2);
    CHECK_THROWS_AS(Decode(eps_bundle, m, SelectDense(m), kWideBeam),
                    DecodeError);
  }
  SUBCASE("empty selection accepts the empty path") {
    FrameSelection empty;
    empty.stats.total_frames = utt.matrix.NumFrames();
    DecodeResult result = Decode(bundle, utt.matrix, empty, kWideBeam);
    CHECK(result.words.empty());
    CHECK(result.frames_decoded == 0);
    CHECK(std::isfinite(result.total_cost));  // empty sentence has LM cost
  }
}

TEST_CASE("decode_batch decodes everything and keeps input order") {
  GraphBundle bundle =
      BuildGraphBundle(OneWordLexicon(), OneWordModel(), BuildRecipe::kDetMin);
  auto corpus = GenerateCorpus(CleanConfig(11), {"hello", "hello hello"},
                               OneWordLexicon());
  std::vector<BatchItem> items;
  for (auto &utt : corpus) items.push_back({utt.utt_id, utt.matrix});

  BatchResult batch = DecodeBatch(bundle, items, Strategy::Parse("dense"),
                                  kWideBeam, 1.0, 1);
  REQUIRE(batch.results.size() == 2);
  CHECK(batch.errors[0].empty());
  CHECK(batch.errors[1].empty());
  CHECK(batch.utt_ids[0] == "utt0000");
  int64_t frames = batch.results[0].frames_decoded + batch.results[1].frames_decoded;
  int64_t total = corpus[0].matrix.NumFrames() + corpus[1].matrix.NumFrames();
  CHECK(frames == total);
  CHECK(batch.results[1].words ==
        std::vector<std::string>{"hello", "hello"});
}

TEST_CASE("decode_batch is deterministic across parallelism") {
  GraphBundle bundle =
      BuildGraphBundle(OneWordLexicon(), OneWordModel(), BuildRecipe::kDetMin);
  std::vector<std::string> lines;
  for (int i = 0; i < 12; ++i) {
    lines.push_back(i % 2 ? "hello hello" : "hello");
  }
  auto corpus = GenerateCorpus(CleanConfig(13), lines, OneWordLexicon());
  std::vector<BatchItem> items;
  for (auto &utt : corpus) items.push_back({utt.utt_id, utt.matrix});

  Strategy strategy = Strategy::Parse("swd:both:1");
  BatchResult serial = DecodeBatch(bundle, items, strategy, kWideBeam, 1.0, 1);
  BatchResult parallel = DecodeBatch(bundle, items, strategy, kWideBeam, 1.0, 4);

  auto normalize = [](const BatchResult &batch) {
    std::ostringstream out;
    WriteResultsJsonl(batch, out);
    std::string normalized;
    std::istringstream in(out.str());
    std::string line;
    while (std::getline(in, line)) {
      auto parsed = nlohmann::json::parse(line);
      parsed["wall_ms"] = 0.0;
      normalized += parsed.dump() + "\n";
    }
    return normalized;
  };
  CHECK(normalize(serial) == normalize(parallel));
}

TEST_CASE("batch errors are collected per utterance") {
  GraphBundle bundle =
      BuildGraphBundle(OneWordLexicon(), OneWordModel(), BuildRecipe::kDetMin);
  auto corpus = GenerateCorpus(CleanConfig(17), {"hello"}, OneWordLexicon());
  std::vector<BatchItem> items;
  items.push_back({corpus[0].utt_id, corpus[0].matrix});
  items.push_back({"bad", PosteriorMatrix(3, 99, 0)});  // wrong vocabulary

  BatchResult batch = DecodeBatch(bundle, items, Strategy::Parse("dense"),
                                  kWideBeam, 1.0, 1);
  CHECK(batch.errors[0].empty());
  CHECK_FALSE(batch.errors[1].empty());

  std::ostringstream out;
  WriteResultsJsonl(batch, out);
  std::string jsonl = out.str();
  CHECK(jsonl.find("\"error\"") != std::string::npos);
}
