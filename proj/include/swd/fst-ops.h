// swd/fst-ops.h

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

#ifndef SWD_FST_OPS_H_
#define SWD_FST_OPS_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "swd/wfst.h"

namespace swd {

enum class SortBy { kILabel, kOLabel };

// Returns a copy with each state's arcs sorted by the chosen label
// (secondary keys: the other label, weight, nextstate).
Wfst ArcSort(const Wfst &fst, SortBy by);

enum class Direction { kFromStart, kToFinal };

/// Single-source shortest distances. kFromStart gives the cheapest cost of
/// reaching each state from the start; kToFinal gives the cheapest cost of
/// completing a path from each state (final weights included). States that
/// cannot be reached / cannot complete get Weight::Zero().
///
/// Implemented as queue-based relaxation, exact for any machine without
/// negative-weight cycles; a relaxation cap turns a suspected negative
/// cycle into an error instead of a hang.
std::vector<Weight> ShortestDistance(const Wfst &fst, Direction direction);

// Removes states that are not on some start-to-final path, renumbering the
// survivors in order. The weighted language is unchanged. A machine with an
// empty language becomes the empty machine.
Wfst Connect(const Wfst &fst);

/// Composition with the standard three-state epsilon filter, so matched
/// epsilon moves are taken simultaneously and one-sided epsilon runs cannot
/// interleave. The result is trimmed. Arcs of b need not be pre-sorted.
Wfst Compose(const Wfst &a, const Wfst &b);

// Removes epsilon (ilabel == olabel == 0) transitions by weighted epsilon
// closure. The result is trimmed.
Wfst RmEpsilon(const Wfst &fst);

/// Weighted subset-construction determinization of an acceptor
/// (every arc must carry ilabel == olabel; encode a transducer first).
/// Epsilon transitions are removed up front. The result has at most one
/// outgoing arc per (state, label), no epsilons, and the same weighted
/// language. state_budget < 0 means 10x the input state count; exceeding
/// the budget throws DeterminizeOverflow.
Wfst Determinize(const Wfst &fst, int64_t state_budget = -1);

/// Minimization of a deterministic acceptor: weight pushing to canonical
/// residuals followed by partition refinement on outgoing signatures.
/// Throws std::invalid_argument on nondeterministic input.
Wfst Minimize(const Wfst &fst);

/// Pushes weights toward the initial state: every state except the start
/// ends up with min over {outgoing arc costs} u {final cost} equal to 0,
/// and every complete path keeps its total cost, so the start state's
/// outgoing minimum equals the machine's best total path cost. Every state
/// must have a path to a final state (Connect first), or this throws.
/// If the start state lies on a cycle it is split first (one extra state,
/// same weighted language).
Wfst WeightPush(const Wfst &fst);

/// Label-pair encoder used to run acceptor-only ops (Determinize, Minimize)
/// on transducers: each distinct (ilabel, olabel) pair maps to one symbol,
/// with (0, 0) kept as epsilon.
struct LabelEncoder {
  // pairs[k] is the label pair encoded as symbol k + 1.
  std::vector<std::pair<Label, Label>> pairs;
};

Wfst EncodeLabels(const Wfst &fst, LabelEncoder *encoder);
Wfst DecodeLabels(const Wfst &fst, const LabelEncoder &encoder);

}  // namespace swd

#endif  // SWD_FST_OPS_H_
