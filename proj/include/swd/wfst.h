// swd/wfst.h

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

#ifndef SWD_WFST_H_
#define SWD_WFST_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "swd/weight.h"

namespace swd {

using StateId = int32_t;
using Label = int32_t;

inline constexpr StateId kNoStateId = -1;
inline constexpr Label kEpsilon = 0;

struct Arc {
  Label ilabel = kEpsilon;
  Label olabel = kEpsilon;
  Weight weight = Weight::One();
  StateId nextstate = kNoStateId;

  Arc() = default;
  Arc(Label i, Label o, Weight w, StateId n)
      : ilabel(i), olabel(o), weight(w), nextstate(n) {}
};

/// Weighted finite-state transducer over the tropical semiring. States are
/// contiguous ids starting at 0; a state is final iff its final weight is
/// finite. The empty machine has no states and no start state.
///
/// A Wfst is intended to be immutable once built; all operations in
/// fst-ops.h return new machines, so built graphs can be shared read-only
/// across threads.
class Wfst {
 public:
  StateId AddState() {
    arcs_.emplace_back();
    final_.push_back(Weight::Zero());
    return static_cast<StateId>(arcs_.size()) - 1;
  }

  void AddStates(int32_t n) {
    for (int32_t i = 0; i < n; ++i) AddState();
  }

  void SetStart(StateId s) { start_ = s; }
  StateId Start() const { return start_; }

  void SetFinal(StateId s, Weight w) { final_[s] = w; }
  Weight Final(StateId s) const { return final_[s]; }
  bool IsFinal(StateId s) const { return !final_[s].IsZero(); }

  void AddArc(StateId s, const Arc &arc) { arcs_[s].push_back(arc); }

  const std::vector<Arc> &Arcs(StateId s) const { return arcs_[s]; }
  std::vector<Arc> *MutableArcs(StateId s) { return &arcs_[s]; }

  StateId NumStates() const { return static_cast<StateId>(arcs_.size()); }
  int64_t NumArcs() const {
    int64_t n = 0;
    for (const auto &a : arcs_) n += static_cast<int64_t>(a.size());
    return n;
  }

  bool Empty() const { return arcs_.empty() || start_ == kNoStateId; }

 private:
  StateId start_ = kNoStateId;
  std::vector<std::vector<Arc>> arcs_;
  std::vector<Weight> final_;
};

/// Bidirectional symbol <-> integer-id table. Id 0 is conventionally the
/// epsilon symbol "<eps>".
class SymbolTable {
 public:
  // Returns the id of the symbol, adding it with the next free id if absent.
  Label AddSymbol(const std::string &symbol);

  std::optional<Label> Find(const std::string &symbol) const;
  const std::string &Name(Label id) const;
  bool Contains(Label id) const {
    return id >= 0 && id < static_cast<Label>(names_.size());
  }

  int32_t NumSymbols() const { return static_cast<int32_t>(names_.size()); }

  // Text format: one "symbol<TAB>id" pair per line.
  static SymbolTable ReadText(std::istream &in, const std::string &source);
  static SymbolTable ReadTextFile(const std::string &path);
  void WriteText(std::ostream &out) const;
  void WriteTextFile(const std::string &path) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Label> ids_;
};

// AT&T text format. Arc lines "src<TAB>dst<TAB>ilabel<TAB>olabel[<TAB>weight]"
// and final lines "state[<TAB>weight]"; an omitted weight reads as 0. The
// first line's src is the start state. Weights are written losslessly.
void WriteFstText(const Wfst &fst, std::ostream &out);
void WriteFstTextFile(const Wfst &fst, const std::string &path);
Wfst ReadFstText(std::istream &in, const std::string &source);
Wfst ReadFstTextFile(const std::string &path);

}  // namespace swd

#endif  // SWD_WFST_H_
