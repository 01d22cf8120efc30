// tests/testing-oracles.cc

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

#include "testing-oracles.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <stdexcept>

namespace swd::testing {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void EnumeratePaths(const Wfst &fst, StateId state, LabelSeq *in, LabelSeq *out,
                    double cost, int depth, Transduction *result) {
  if (depth > fst.NumStates()) {
    throw std::invalid_argument("enumeration requires an acyclic machine");
  }
  if (fst.IsFinal(state)) {
    double total = cost + fst.Final(state).Value();
    auto key = std::make_pair(*in, *out);
    auto it = result->find(key);
    if (it == result->end()) {
      result->emplace(std::move(key), total);
    } else {
      it->second = std::min(it->second, total);
    }
  }
  for (const Arc &arc : fst.Arcs(state)) {
    if (arc.ilabel != kEpsilon) in->push_back(arc.ilabel);
    if (arc.olabel != kEpsilon) out->push_back(arc.olabel);
    EnumeratePaths(fst, arc.nextstate, in, out, cost + arc.weight.Value(),
                   depth + 1, result);
    if (arc.ilabel != kEpsilon) in->pop_back();
    if (arc.olabel != kEpsilon) out->pop_back();
  }
}

bool CostsApproxEqual(double a, double b, double delta) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= delta;
}

}  // namespace

Transduction EnumerateTransducer(const Wfst &fst) {
  Transduction result;
  if (fst.Empty()) return result;
  LabelSeq in, out;
  EnumeratePaths(fst, fst.Start(), &in, &out, 0.0, 0, &result);
  return result;
}

AcceptorLanguage EnumerateAcceptor(const Wfst &fst) {
  AcceptorLanguage language;
  for (const auto &[key, cost] : EnumerateTransducer(fst)) {
    if (key.first != key.second) {
      throw std::invalid_argument("machine is not an acceptor");
    }
    language[key.first] = cost;
  }
  return language;
}

bool TransductionsApproxEqual(const Transduction &a, const Transduction &b,
                              double delta) {
  if (a.size() != b.size()) return false;
  for (const auto &[key, cost] : a) {
    auto it = b.find(key);
    if (it == b.end() || !CostsApproxEqual(cost, it->second, delta)) {
      return false;
    }
  }
  return true;
}

bool LanguagesApproxEqual(const AcceptorLanguage &a, const AcceptorLanguage &b,
                          double delta) {
  if (a.size() != b.size()) return false;
  for (const auto &[key, cost] : a) {
    auto it = b.find(key);
    if (it == b.end() || !CostsApproxEqual(cost, it->second, delta)) {
      return false;
    }
  }
  return true;
}

Transduction ComposeOracle(const Transduction &a, const Transduction &b) {
  Transduction composed;
  for (const auto &[key_a, cost_a] : a) {
    for (const auto &[key_b, cost_b] : b) {
      if (key_a.second != key_b.first) continue;
      auto key = std::make_pair(key_a.first, key_b.second);
      double cost = cost_a + cost_b;
      auto it = composed.find(key);
      if (it == composed.end()) {
        composed.emplace(std::move(key), cost);
      } else {
        it->second = std::min(it->second, cost);
      }
    }
  }
  return composed;
}

Wfst RandomAcyclicFst(std::mt19937_64 &rng, const RandomFstOptions &options) {
  auto uniform = [&rng](int32_t lo, int32_t hi) {  // inclusive
    return lo + static_cast<int32_t>(rng() % (hi - lo + 1));
  };
  auto chance = [&rng](double p) {
    return (static_cast<double>(rng() >> 11) * 0x1.0p-53) < p;
  };
  auto grid_weight = [&]() { return Weight(uniform(0, 40) / 8.0); };
  auto random_label = [&]() {
    if (chance(options.eps_prob)) return kEpsilon;
    return static_cast<Label>(uniform(1, options.num_symbols));
  };

  Wfst fst;
  const int32_t num_states = uniform(options.min_states, options.max_states);
  fst.AddStates(num_states);
  fst.SetStart(0);
  for (StateId q = 0; q + 1 < num_states; ++q) {
    int32_t arcs = uniform(1, options.max_arcs_per_state);
    for (int32_t k = 0; k < arcs; ++k) {
      StateId target = uniform(q + 1, num_states - 1);
      Label ilabel = random_label();
      Label olabel = options.acceptor ? ilabel : random_label();
      fst.AddArc(q, Arc(ilabel, olabel, grid_weight(), target));
    }
  }
  bool any_final = false;
  for (StateId q = 0; q < num_states; ++q) {
    if (chance(options.final_prob)) {
      fst.SetFinal(q, grid_weight());
      any_final = true;
    }
  }
  if (!any_final) fst.SetFinal(num_states - 1, grid_weight());
  return fst;
}

std::vector<int32_t> CollapseOracle(const std::vector<int32_t> &frames,
                                    int32_t blank) {
  std::vector<int32_t> deduped;
  for (int32_t f : frames) {
    if (deduped.empty() || deduped.back() != f) deduped.push_back(f);
  }
  std::vector<int32_t> collapsed;
  for (int32_t f : deduped) {
    if (f != blank) collapsed.push_back(f);
  }
  return collapsed;
}

int64_t EditDistanceBfs(const std::vector<int32_t> &ref,
                        const std::vector<int32_t> &hyp) {
  const size_t n = ref.size(), m = hyp.size();
  const int64_t unset = -1;
  std::vector<std::vector<int64_t>> dist(n + 1,
                                         std::vector<int64_t>(m + 1, unset));
  std::deque<std::pair<size_t, size_t>> queue;
  dist[0][0] = 0;
  queue.emplace_back(0, 0);
  while (!queue.empty()) {
    auto [i, j] = queue.front();
    queue.pop_front();
    int64_t d = dist[i][j];
    auto relax = [&](size_t ni, size_t nj, int64_t cost) {
      if (dist[ni][nj] != unset && dist[ni][nj] <= d + cost) return;
      dist[ni][nj] = d + cost;
      if (cost == 0) {
        queue.emplace_front(ni, nj);
      } else {
        queue.emplace_back(ni, nj);
      }
    };
    if (i < n && j < m && ref[i] == hyp[j]) relax(i + 1, j + 1, 0);
    if (i < n && j < m) relax(i + 1, j + 1, 1);
    if (i < n) relax(i + 1, j, 1);
    if (j < m) relax(i, j + 1, 1);
  }
  return dist[n][m];
}

double ExhaustiveDecodeCost(
    const Wfst &graph, int32_t num_frames,
    const std::function<double(int32_t, Label)> &acoustic) {
  if (graph.Empty()) return kInf;
  const StateId n = graph.NumStates();
  std::vector<double> layer(n, kInf);
  layer[graph.Start()] = 0.0;
  auto relax_epsilon = [&](std::vector<double> *d) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (StateId q = 0; q < n; ++q) {
        if (std::isinf((*d)[q])) continue;
        for (const Arc &arc : graph.Arcs(q)) {
          if (arc.ilabel != kEpsilon) continue;
          double cand = (*d)[q] + arc.weight.Value();
          if (cand < (*d)[arc.nextstate]) {
            (*d)[arc.nextstate] = cand;
            changed = true;
          }
        }
      }
    }
  };
  relax_epsilon(&layer);
  for (int32_t k = 0; k < num_frames; ++k) {
    std::vector<double> next(n, kInf);
    for (StateId q = 0; q < n; ++q) {
      if (std::isinf(layer[q])) continue;
      for (const Arc &arc : graph.Arcs(q)) {
        if (arc.ilabel == kEpsilon) continue;
        double cand = layer[q] + arc.weight.Value() + acoustic(k, arc.ilabel);
        next[arc.nextstate] = std::min(next[arc.nextstate], cand);
      }
    }
    relax_epsilon(&next);
    layer = std::move(next);
  }
  double best = kInf;
  for (StateId q = 0; q < n; ++q) {
    if (graph.IsFinal(q)) {
      best = std::min(best, layer[q] + graph.Final(q).Value());
    }
  }
  return best;
}

bool IsomorphicDeterministic(const Wfst &a, const Wfst &b, double delta) {
  if (a.NumStates() != b.NumStates()) return false;
  if (a.Empty() != b.Empty()) return false;
  if (a.Empty()) return true;
  std::vector<StateId> map_ab(a.NumStates(), kNoStateId);
  std::deque<std::pair<StateId, StateId>> queue{{a.Start(), b.Start()}};
  map_ab[a.Start()] = b.Start();
  std::set<StateId> mapped_b{b.Start()};
  while (!queue.empty()) {
    auto [qa, qb] = queue.front();
    queue.pop_front();
    if (a.IsFinal(qa) != b.IsFinal(qb)) return false;
    if (a.IsFinal(qa) &&
        !CostsApproxEqual(a.Final(qa).Value(), b.Final(qb).Value(), delta)) {
      return false;
    }
    if (a.Arcs(qa).size() != b.Arcs(qb).size()) return false;
    auto sorted = [](std::vector<Arc> arcs) {
      std::sort(arcs.begin(), arcs.end(), [](const Arc &x, const Arc &y) {
        return std::tie(x.ilabel, x.olabel) < std::tie(y.ilabel, y.olabel);
      });
      return arcs;
    };
    auto arcs_a = sorted(a.Arcs(qa));
    auto arcs_b = sorted(b.Arcs(qb));
    for (size_t i = 0; i < arcs_a.size(); ++i) {
      const Arc &x = arcs_a[i];
      const Arc &y = arcs_b[i];
      if (x.ilabel != y.ilabel || x.olabel != y.olabel) return false;
      if (!CostsApproxEqual(x.weight.Value(), y.weight.Value(), delta)) {
        return false;
      }
      if (map_ab[x.nextstate] == kNoStateId) {
        if (mapped_b.count(y.nextstate)) return false;
        map_ab[x.nextstate] = y.nextstate;
        mapped_b.insert(y.nextstate);
        queue.emplace_back(x.nextstate, y.nextstate);
      } else if (map_ab[x.nextstate] != y.nextstate) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace swd::testing
