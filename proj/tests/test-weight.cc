// tests/test-weight.cc

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

#include "swd/weight.h"

#include <random>
#include <vector>

#include "doctest.h"

using namespace swd;

namespace {

// Grid-valued weights (exact doubles) plus Zero, so the laws hold exactly.
std::vector<Weight> RandomWeights(std::mt19937_64 &rng, int n) {
  std::vector<Weight> weights;
  for (int i = 0; i < n; ++i) {
    if (rng() % 8 == 0) {
      weights.push_back(Weight::Zero());
    } else {
      weights.push_back(Weight(static_cast<double>(rng() % 640) / 8.0));
    }
  }
  return weights;
}

}  // namespace

TEST_CASE("tropical weight identities") {
  CHECK(Weight::Zero().IsZero());
  CHECK(Weight::One().Value() == 0.0);
  CHECK(Plus(Weight(3.0), Weight::Zero()) == Weight(3.0));
  CHECK(Times(Weight(3.0), Weight::One()) == Weight(3.0));
  CHECK(Times(Weight(3.0), Weight::Zero()).IsZero());
  CHECK(Plus(Weight(3.0), Weight(5.0)) == Weight(3.0));
  CHECK(Times(Weight(3.0), Weight(5.0)) == Weight(8.0));
  CHECK(Divide(Weight(8.0), Weight(5.0)) == Weight(3.0));
  CHECK(Divide(Weight::Zero(), Weight(5.0)).IsZero());
  CHECK(Weight(1.0).Member());
  CHECK(Weight::Zero().Member());
  CHECK_FALSE(Weight(std::numeric_limits<double>::quiet_NaN()).Member());
}

TEST_CASE("tropical semiring laws on random values") {
  std::mt19937_64 rng(20260811);
  auto ws = RandomWeights(rng, 3000);
  for (size_t i = 0; i + 2 < ws.size(); i += 3) {
    Weight a = ws[i], b = ws[i + 1], c = ws[i + 2];
    // Plus: commutative, associative, idempotent; identity Zero.
    CHECK(Plus(a, b) == Plus(b, a));
    CHECK(Plus(Plus(a, b), c) == Plus(a, Plus(b, c)));
    CHECK(Plus(a, a) == a);
    CHECK(Plus(a, Weight::Zero()) == a);
    // Times: associative; identity One; Zero annihilates.
    CHECK(Times(Times(a, b), c) == Times(a, Times(b, c)));
    CHECK(Times(a, Weight::One()) == a);
    CHECK(Times(Weight::One(), a) == a);
    CHECK(Times(a, Weight::Zero()).IsZero());
    CHECK(Times(Weight::Zero(), a).IsZero());
    // Distributivity both ways.
    CHECK(Times(a, Plus(b, c)) == Plus(Times(a, b), Times(a, c)));
    CHECK(Times(Plus(a, b), c) == Plus(Times(a, c), Times(b, c)));
  }
}

TEST_CASE("approx equality treats Zero specially") {
  CHECK(ApproxEqual(Weight::Zero(), Weight::Zero()));
  CHECK_FALSE(ApproxEqual(Weight::Zero(), Weight(1e12)));
  CHECK(ApproxEqual(Weight(1.0), Weight(1.0 + 1e-12)));
  CHECK_FALSE(ApproxEqual(Weight(1.0), Weight(1.1)));
}
