// swd/fst-ops.cc

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

#include "swd/fst-ops.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "swd/errors.h"

namespace swd {

namespace {

bool ArcLess(const Arc &a, const Arc &b, SortBy by) {
  Label ka = by == SortBy::kILabel ? a.ilabel : a.olabel;
  Label kb = by == SortBy::kILabel ? b.ilabel : b.olabel;
  Label sa = by == SortBy::kILabel ? a.olabel : a.ilabel;
  Label sb = by == SortBy::kILabel ? b.olabel : b.ilabel;
  if (ka != kb) return ka < kb;
  if (sa != sb) return sa < sb;
  if (a.weight.Value() != b.weight.Value())
    return a.weight.Value() < b.weight.Value();
  return a.nextstate < b.nextstate;
}

std::vector<bool> AccessibleStates(const Wfst &fst) {
  std::vector<bool> seen(fst.NumStates(), false);
  if (fst.Empty()) return seen;
  std::deque<StateId> queue{fst.Start()};
  seen[fst.Start()] = true;
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    for (const Arc &arc : fst.Arcs(q)) {
      if (!seen[arc.nextstate]) {
        seen[arc.nextstate] = true;
        queue.push_back(arc.nextstate);
      }
    }
  }
  return seen;
}

std::vector<bool> CoaccessibleStates(const Wfst &fst) {
  std::vector<std::vector<StateId>> rev(fst.NumStates());
  std::vector<bool> seen(fst.NumStates(), false);
  std::deque<StateId> queue;
  for (StateId q = 0; q < fst.NumStates(); ++q) {
    for (const Arc &arc : fst.Arcs(q)) rev[arc.nextstate].push_back(q);
    if (fst.IsFinal(q)) {
      seen[q] = true;
      queue.push_back(q);
    }
  }
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    for (StateId p : rev[q]) {
      if (!seen[p]) {
        seen[p] = true;
        queue.push_back(p);
      }
    }
  }
  return seen;
}

// Queue-based relaxation over an explicit adjacency list; exact without
// negative cycles, throws if the relaxation cap is hit.
std::vector<Weight> Relax(int32_t num_states,
                          const std::vector<std::vector<std::pair<StateId, Weight>>> &adj,
                          const std::vector<Weight> &seeds) {
  std::vector<Weight> dist(seeds);
  std::vector<bool> queued(num_states, false);
  std::deque<StateId> queue;
  for (StateId q = 0; q < num_states; ++q) {
    if (!dist[q].IsZero()) {
      queue.push_back(q);
      queued[q] = true;
    }
  }
  int64_t arcs = 0;
  for (const auto &a : adj) arcs += static_cast<int64_t>(a.size());
  const int64_t cap = (static_cast<int64_t>(num_states) + 2) * (arcs + 2) * 4 + 1024;
  int64_t dequeues = 0;
  while (!queue.empty()) {
    if (++dequeues > cap) {
      throw std::invalid_argument(
          "shortest-distance relaxation did not converge; the machine "
          "appears to contain a negative-weight cycle");
    }
    StateId q = queue.front();
    queue.pop_front();
    queued[q] = false;
    for (const auto &[next, w] : adj[q]) {
      Weight cand = Times(dist[q], w);
      if (cand.Value() < dist[next].Value()) {
        dist[next] = cand;
        if (!queued[next]) {
          queue.push_back(next);
          queued[next] = true;
        }
      }
    }
  }
  return dist;
}

int64_t QuantizeWeight(Weight w) {
  if (w.IsZero()) return std::numeric_limits<int64_t>::max();
  return std::llround(w.Value() * 1e10);
}

}  // namespace

Wfst ArcSort(const Wfst &fst, SortBy by) {
  Wfst out = fst;
  for (StateId q = 0; q < out.NumStates(); ++q) {
    auto *arcs = out.MutableArcs(q);
    std::stable_sort(arcs->begin(), arcs->end(),
                     [by](const Arc &a, const Arc &b) { return ArcLess(a, b, by); });
  }
  return out;
}

std::vector<Weight> ShortestDistance(const Wfst &fst, Direction direction) {
  std::vector<std::vector<std::pair<StateId, Weight>>> adj(fst.NumStates());
  std::vector<Weight> seeds(fst.NumStates(), Weight::Zero());
  if (fst.NumStates() == 0) return {};
  if (direction == Direction::kFromStart) {
    if (fst.Start() == kNoStateId) return seeds;
    for (StateId q = 0; q < fst.NumStates(); ++q) {
      for (const Arc &arc : fst.Arcs(q)) {
        adj[q].emplace_back(arc.nextstate, arc.weight);
      }
    }
    seeds[fst.Start()] = Weight::One();
  } else {
    for (StateId q = 0; q < fst.NumStates(); ++q) {
      for (const Arc &arc : fst.Arcs(q)) {
        adj[arc.nextstate].emplace_back(q, arc.weight);
      }
      if (fst.IsFinal(q)) seeds[q] = fst.Final(q);
    }
  }
  return Relax(fst.NumStates(), adj, seeds);
}

Wfst Connect(const Wfst &fst) {
  if (fst.Empty()) return Wfst();
  std::vector<bool> acc = AccessibleStates(fst);
  std::vector<bool> coacc = CoaccessibleStates(fst);
  std::vector<StateId> remap(fst.NumStates(), kNoStateId);
  Wfst out;
  for (StateId q = 0; q < fst.NumStates(); ++q) {
    if (acc[q] && coacc[q]) remap[q] = out.AddState();
  }
  if (remap[fst.Start()] == kNoStateId) return Wfst();
  out.SetStart(remap[fst.Start()]);
  for (StateId q = 0; q < fst.NumStates(); ++q) {
    if (remap[q] == kNoStateId) continue;
    for (const Arc &arc : fst.Arcs(q)) {
      if (remap[arc.nextstate] == kNoStateId) continue;
      out.AddArc(remap[q], Arc(arc.ilabel, arc.olabel, arc.weight,
                               remap[arc.nextstate]));
    }
    if (fst.IsFinal(q)) out.SetFinal(remap[q], fst.Final(q));
  }
  return out;
}

Wfst Compose(const Wfst &a, const Wfst &b) {
  if (a.Empty() || b.Empty()) return Wfst();

  // Arcs of b sorted by ilabel for range lookups.
  std::vector<std::vector<Arc>> b_arcs(b.NumStates());
  for (StateId q = 0; q < b.NumStates(); ++q) {
    b_arcs[q] = b.Arcs(q);
    std::stable_sort(b_arcs[q].begin(), b_arcs[q].end(),
                     [](const Arc &x, const Arc &y) { return x.ilabel < y.ilabel; });
  }
  auto match_range = [&](StateId q, Label label) {
    const auto &arcs = b_arcs[q];
    auto lo = std::lower_bound(arcs.begin(), arcs.end(), label,
                               [](const Arc &arc, Label l) { return arc.ilabel < l; });
    auto hi = std::upper_bound(arcs.begin(), arcs.end(), label,
                               [](Label l, const Arc &arc) { return l < arc.ilabel; });
    return std::make_pair(lo, hi);
  };

  // Product states are (state of a, state of b, filter), filter in {0,1,2}:
  // 0 after a match or a paired epsilon move, 1 inside an a-side epsilon
  // run, 2 inside a b-side epsilon run.
  Wfst out;
  std::unordered_map<int64_t, StateId> ids;
  auto key = [&](StateId s1, StateId s2, int f) {
    return (static_cast<int64_t>(s1) * b.NumStates() + s2) * 3 + f;
  };
  std::deque<std::tuple<StateId, StateId, int>> queue;
  auto state_of = [&](StateId s1, StateId s2, int f) {
    auto [it, inserted] = ids.try_emplace(key(s1, s2, f), out.NumStates());
    if (inserted) {
      out.AddState();
      queue.emplace_back(s1, s2, f);
    }
    return it->second;
  };

  StateId start = state_of(a.Start(), b.Start(), 0);
  out.SetStart(start);
  while (!queue.empty()) {
    auto [s1, s2, f] = queue.front();
    queue.pop_front();
    StateId q = ids[key(s1, s2, f)];
    if (a.IsFinal(s1) && b.IsFinal(s2)) {
      out.SetFinal(q, Times(a.Final(s1), b.Final(s2)));
    }
    for (const Arc &arc_a : a.Arcs(s1)) {
      if (arc_a.olabel != kEpsilon) {
        auto [lo, hi] = match_range(s2, arc_a.olabel);
        for (auto it = lo; it != hi; ++it) {
          out.AddArc(q, Arc(arc_a.ilabel, it->olabel,
                            Times(arc_a.weight, it->weight),
                            state_of(arc_a.nextstate, it->nextstate, 0)));
        }
      } else {
        if (f == 0) {
          // Paired move: a advances on an output-epsilon arc while b
          // advances on an input-epsilon arc.
          auto [lo, hi] = match_range(s2, kEpsilon);
          for (auto it = lo; it != hi; ++it) {
            out.AddArc(q, Arc(arc_a.ilabel, it->olabel,
                              Times(arc_a.weight, it->weight),
                              state_of(arc_a.nextstate, it->nextstate, 0)));
          }
        }
        if (f != 2) {
          out.AddArc(q, Arc(arc_a.ilabel, kEpsilon, arc_a.weight,
                            state_of(arc_a.nextstate, s2, 1)));
        }
      }
    }
    if (f != 1) {
      auto [lo, hi] = match_range(s2, kEpsilon);
      for (auto it = lo; it != hi; ++it) {
        out.AddArc(q, Arc(kEpsilon, it->olabel, it->weight,
                          state_of(s1, it->nextstate, 2)));
      }
    }
  }
  return Connect(out);
}

Wfst RmEpsilon(const Wfst &fst) {
  if (fst.Empty()) return Wfst();
  const StateId n = fst.NumStates();

  // Epsilon-only adjacency.
  std::vector<std::vector<std::pair<StateId, Weight>>> eps(n);
  for (StateId q = 0; q < n; ++q) {
    for (const Arc &arc : fst.Arcs(q)) {
      if (arc.ilabel == kEpsilon && arc.olabel == kEpsilon) {
        eps[q].emplace_back(arc.nextstate, arc.weight);
      }
    }
  }

  Wfst out;
  out.AddStates(n);
  out.SetStart(fst.Start());
  std::vector<Weight> seeds(n, Weight::Zero());
  for (StateId q = 0; q < n; ++q) {
    seeds[q] = Weight::One();
    std::vector<Weight> closure = Relax(n, eps, seeds);
    seeds[q] = Weight::Zero();

    std::map<std::tuple<Label, Label, StateId>, Weight> merged;
    Weight final_w = Weight::Zero();
    for (StateId p = 0; p < n; ++p) {
      if (closure[p].IsZero()) continue;
      final_w = Plus(final_w, Times(closure[p], fst.Final(p)));
      for (const Arc &arc : fst.Arcs(p)) {
        if (arc.ilabel == kEpsilon && arc.olabel == kEpsilon) continue;
        Weight w = Times(closure[p], arc.weight);
        if (w.IsZero()) continue;
        auto k = std::make_tuple(arc.ilabel, arc.olabel, arc.nextstate);
        auto it = merged.find(k);
        if (it == merged.end()) {
          merged.emplace(k, w);
        } else {
          it->second = Plus(it->second, w);
        }
      }
    }
    for (const auto &[k, w] : merged) {
      out.AddArc(q, Arc(std::get<0>(k), std::get<1>(k), w, std::get<2>(k)));
    }
    if (!final_w.IsZero()) out.SetFinal(q, final_w);
  }
  return Connect(out);
}

namespace {

// A weighted subset in canonical form: sorted by state, residuals
// min-normalized to 0, keyed on exact bit patterns.
using Subset = std::vector<std::pair<StateId, double>>;
using SubsetKey = std::vector<std::pair<StateId, uint64_t>>;

SubsetKey MakeKey(const Subset &subset) {
  SubsetKey key;
  key.reserve(subset.size());
  for (const auto &[q, r] : subset) {
    key.emplace_back(q, std::bit_cast<uint64_t>(r));
  }
  return key;
}

void RequireAcceptor(const Wfst &fst, const char *op) {
  for (StateId q = 0; q < fst.NumStates(); ++q) {
    for (const Arc &arc : fst.Arcs(q)) {
      if (arc.ilabel != arc.olabel) {
        throw std::invalid_argument(std::string(op) +
                                    " requires an acceptor; encode label "
                                    "pairs first");
      }
    }
  }
}

}  // namespace

Wfst Determinize(const Wfst &fst, int64_t state_budget) {
  RequireAcceptor(fst, "determinize");
  if (state_budget < 0) state_budget = 10 * std::max<int64_t>(fst.NumStates(), 1);
  Wfst nfa = RmEpsilon(fst);
  if (nfa.Empty()) return Wfst();

  Wfst out;
  std::map<SubsetKey, StateId> ids;
  std::deque<Subset> queue;
  auto state_of = [&](Subset subset) {
    std::sort(subset.begin(), subset.end());
    SubsetKey key = MakeKey(subset);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    if (out.NumStates() >= state_budget) {
      throw DeterminizeOverflow(
          "determinization exceeded the state budget of " +
          std::to_string(state_budget) + " states (input had " +
          std::to_string(fst.NumStates()) + " states)");
    }
    StateId id = out.AddState();
    ids.emplace(std::move(key), id);
    queue.push_back(std::move(subset));
    return id;
  };

  out.SetStart(state_of(Subset{{nfa.Start(), 0.0}}));
  while (!queue.empty()) {
    Subset subset = std::move(queue.front());
    queue.pop_front();
    StateId q = ids[MakeKey(subset)];

    Weight final_w = Weight::Zero();
    std::map<Label, std::map<StateId, double>> moves;
    for (const auto &[p, residual] : subset) {
      final_w = Plus(final_w, Times(Weight(residual), nfa.Final(p)));
      for (const Arc &arc : nfa.Arcs(p)) {
        if (arc.weight.IsZero()) continue;  // dead arc
        double cost = residual + arc.weight.Value();
        auto &bucket = moves[arc.ilabel];
        auto it = bucket.find(arc.nextstate);
        if (it == bucket.end()) {
          bucket.emplace(arc.nextstate, cost);
        } else {
          it->second = std::min(it->second, cost);
        }
      }
    }
    if (!final_w.IsZero()) out.SetFinal(q, final_w);

    for (const auto &[label, bucket] : moves) {
      double w_min = std::numeric_limits<double>::infinity();
      for (const auto &[p, cost] : bucket) w_min = std::min(w_min, cost);
      Subset target;
      target.reserve(bucket.size());
      for (const auto &[p, cost] : bucket) target.emplace_back(p, cost - w_min);
      StateId next = state_of(std::move(target));
      out.AddArc(q, Arc(label, label, Weight(w_min), next));
    }
  }
  return out;
}

Wfst WeightPush(const Wfst &fst) {
  if (fst.Empty()) return Wfst();
  std::vector<Weight> dist = ShortestDistance(fst, Direction::kToFinal);
  for (StateId q = 0; q < fst.NumStates(); ++q) {
    if (dist[q].IsZero()) {
      throw std::invalid_argument(
          "weight_push requires every state to reach a final state "
          "(state " + std::to_string(q) + " cannot); run Connect first");
    }
  }

  Wfst out = fst;
  StateId start = out.Start();
  std::vector<bool> acc = AccessibleStates(fst);
  bool start_on_cycle = false;
  for (StateId q = 0; q < fst.NumStates() && !start_on_cycle; ++q) {
    if (!acc[q]) continue;
    for (const Arc &arc : fst.Arcs(q)) {
      if (arc.nextstate == start) {
        start_on_cycle = true;
        break;
      }
    }
  }
  if (start_on_cycle) {
    // Split the start so it has no incoming arcs; totals stay exact.
    StateId split = out.AddState();
    for (const Arc &arc : fst.Arcs(start)) out.AddArc(split, arc);
    out.SetFinal(split, fst.Final(start));
    out.SetStart(split);
    dist.push_back(dist[start]);
    start = split;
  }

  auto reweight = [](Weight w) {
    // Clamp floating-point undershoot; exact arithmetic never goes below 0.
    if (!w.IsZero() && w.Value() < 0.0 && w.Value() > -1e-9) return Weight::One();
    return w;
  };
  for (StateId q = 0; q < out.NumStates(); ++q) {
    for (Arc &arc : *out.MutableArcs(q)) {
      Weight pushed = Times(arc.weight, dist[arc.nextstate]);
      if (q != start) pushed = reweight(Divide(pushed, dist[q]));
      arc.weight = pushed;
    }
    if (q != start && out.IsFinal(q)) {
      out.SetFinal(q, reweight(Divide(out.Final(q), dist[q])));
    }
  }
  return out;
}

Wfst Minimize(const Wfst &fst) {
  RequireAcceptor(fst, "minimize");
  for (StateId q = 0; q < fst.NumStates(); ++q) {
    std::vector<Label> labels;
    for (const Arc &arc : fst.Arcs(q)) labels.push_back(arc.ilabel);
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
      throw std::invalid_argument(
          "minimize requires a deterministic acceptor (state " +
          std::to_string(q) + " has duplicate labels)");
    }
  }

  Wfst trimmed = Connect(fst);
  if (trimmed.Empty()) return Wfst();
  Wfst pushed = WeightPush(trimmed);
  const StateId n = pushed.NumStates();

  // Moore partition refinement on (final class, outgoing signatures).
  std::vector<int32_t> cls(n);
  {
    std::map<int64_t, int32_t> final_classes;
    for (StateId q = 0; q < n; ++q) {
      int64_t k = pushed.IsFinal(q) ? QuantizeWeight(pushed.Final(q))
                                    : std::numeric_limits<int64_t>::min();
      auto [it, _] = final_classes.try_emplace(k, static_cast<int32_t>(final_classes.size()));
      cls[q] = it->second;
    }
  }
  size_t num_classes = 0;
  while (true) {
    using Signature = std::pair<int32_t, std::vector<std::tuple<Label, int64_t, int32_t>>>;
    std::map<Signature, int32_t> next_classes;
    std::vector<int32_t> next_cls(n);
    for (StateId q = 0; q < n; ++q) {
      Signature sig;
      sig.first = cls[q];
      for (const Arc &arc : pushed.Arcs(q)) {
        sig.second.emplace_back(arc.ilabel, QuantizeWeight(arc.weight),
                                cls[arc.nextstate]);
      }
      std::sort(sig.second.begin(), sig.second.end());
      auto [it, _] = next_classes.try_emplace(sig, static_cast<int32_t>(next_classes.size()));
      next_cls[q] = it->second;
    }
    cls = std::move(next_cls);
    if (next_classes.size() == num_classes) break;
    num_classes = next_classes.size();
  }

  Wfst out;
  out.AddStates(static_cast<int32_t>(num_classes));
  out.SetStart(cls[pushed.Start()]);
  std::vector<bool> emitted(num_classes, false);
  for (StateId q = 0; q < n; ++q) {
    if (emitted[cls[q]]) continue;
    emitted[cls[q]] = true;
    for (const Arc &arc : pushed.Arcs(q)) {
      out.AddArc(cls[q], Arc(arc.ilabel, arc.olabel, arc.weight,
                             cls[arc.nextstate]));
    }
    if (pushed.IsFinal(q)) out.SetFinal(cls[q], pushed.Final(q));
  }
  return out;
}

Wfst EncodeLabels(const Wfst &fst, LabelEncoder *encoder) {
  encoder->pairs.clear();
  std::map<std::pair<Label, Label>, Label> ids;
  Wfst out = fst;
  for (StateId q = 0; q < out.NumStates(); ++q) {
    for (Arc &arc : *out.MutableArcs(q)) {
      std::pair<Label, Label> pair{arc.ilabel, arc.olabel};
      Label encoded;
      if (pair == std::pair<Label, Label>{kEpsilon, kEpsilon}) {
        encoded = kEpsilon;
      } else {
        auto it = ids.find(pair);
        if (it == ids.end()) {
          encoder->pairs.push_back(pair);
          encoded = static_cast<Label>(encoder->pairs.size());
          ids.emplace(pair, encoded);
        } else {
          encoded = it->second;
        }
      }
      arc.ilabel = encoded;
      arc.olabel = encoded;
    }
  }
  return out;
}

Wfst DecodeLabels(const Wfst &fst, const LabelEncoder &encoder) {
  Wfst out = fst;
  for (StateId q = 0; q < out.NumStates(); ++q) {
    for (Arc &arc : *out.MutableArcs(q)) {
      if (arc.ilabel == kEpsilon) continue;
      if (arc.ilabel < 1 ||
          arc.ilabel > static_cast<Label>(encoder.pairs.size())) {
        throw std::invalid_argument("decode: unknown encoded label " +
                                    std::to_string(arc.ilabel));
      }
      const auto &[ilabel, olabel] = encoder.pairs[arc.ilabel - 1];
      arc.ilabel = ilabel;
      arc.olabel = olabel;
    }
  }
  return out;
}

}  // namespace swd
