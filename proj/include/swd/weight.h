// swd/weight.h

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

#ifndef SWD_WEIGHT_H_
#define SWD_WEIGHT_H_

#include <algorithm>
#include <cmath>
#include <limits>

namespace swd {

/// Tropical semiring weight: Plus is min, Times is arithmetic addition,
/// Zero (the Plus identity) is +infinity and One (the Times identity) is 0.
/// Costs are normally non-negative; NaN is never a member of the semiring.
class Weight {
 public:
  Weight() : value_(kInfinity) {}
  explicit Weight(double value) : value_(value) {}

  static Weight Zero() { return Weight(kInfinity); }
  static Weight One() { return Weight(0.0); }

  double Value() const { return value_; }
  bool Member() const { return !std::isnan(value_); }
  bool IsZero() const { return value_ == kInfinity; }

  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

 private:
  double value_;
};

inline Weight Plus(Weight a, Weight b) {
  return Weight(std::min(a.Value(), b.Value()));
}

inline Weight Times(Weight a, Weight b) {
  if (a.IsZero() || b.IsZero()) return Weight::Zero();
  return Weight(a.Value() + b.Value());
}

// Residual weight a (x) b^-1, i.e. a - b. Divide(Zero, b) stays Zero.
inline Weight Divide(Weight a, Weight b) {
  if (a.IsZero()) return Weight::Zero();
  return Weight(a.Value() - b.Value());
}

inline bool operator==(Weight a, Weight b) {
  return a.Value() == b.Value() || (a.IsZero() && b.IsZero());
}

inline bool operator!=(Weight a, Weight b) { return !(a == b); }

inline bool ApproxEqual(Weight a, Weight b, double delta = 1e-9) {
  if (a.IsZero() || b.IsZero()) return a.IsZero() && b.IsZero();
  return std::fabs(a.Value() - b.Value()) <= delta;
}

}  // namespace swd

#endif  // SWD_WEIGHT_H_
