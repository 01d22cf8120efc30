// tests/test-wfst.cc

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

#include "swd/wfst.h"

#include <random>
#include <sstream>

#include "doctest.h"
#include "swd/errors.h"
#include "testing-oracles.h"

using namespace swd;
using namespace swd::testing;

TEST_CASE("wfst basic construction") {
  Wfst fst;
  CHECK(fst.Empty());
  StateId s0 = fst.AddState();
  StateId s1 = fst.AddState();
  fst.SetStart(s0);
  fst.AddArc(s0, Arc(1, 2, Weight(0.5), s1));
  fst.SetFinal(s1, Weight::One());
  CHECK_FALSE(fst.Empty());
  CHECK(fst.NumStates() == 2);
  CHECK(fst.NumArcs() == 1);
  CHECK(fst.IsFinal(s1));
  CHECK_FALSE(fst.IsFinal(s0));
  CHECK(fst.Final(s0).IsZero());
}

TEST_CASE("fst text format round trip") {
  std::mt19937_64 rng(7);
  RandomFstOptions options;
  options.acceptor = false;
  options.eps_prob = 0.2;
  for (int trial = 0; trial < 40; ++trial) {
    Wfst fst = RandomAcyclicFst(rng, options);
    std::ostringstream text;
    WriteFstText(fst, text);
    std::istringstream in(text.str());
    Wfst read = ReadFstText(in, "<test>");
    CHECK(TransductionsApproxEqual(EnumerateTransducer(fst),
                                   EnumerateTransducer(read), 0.0));
    // Writing again is byte-stable.
    std::ostringstream text2;
    WriteFstText(read, text2);
    std::istringstream in2(text2.str());
    Wfst read2 = ReadFstText(in2, "<test>");
    CHECK(TransductionsApproxEqual(EnumerateTransducer(read),
                                   EnumerateTransducer(read2), 0.0));
  }
}

TEST_CASE("fst text reader semantics") {
  SUBCASE("first line's src is the start state; omitted weight reads as 0") {
    std::istringstream in("2\t1\t3\t4\n1\n");
    Wfst fst = ReadFstText(in, "<test>");
    CHECK(fst.Start() == 2);
    CHECK(fst.NumStates() == 3);
    REQUIRE(fst.Arcs(2).size() == 1);
    CHECK(fst.Arcs(2)[0].weight == Weight::One());
    CHECK(fst.IsFinal(1));
    CHECK(fst.Final(1) == Weight::One());
  }
  SUBCASE("final line with weight") {
    std::istringstream in("0\t0\t1\t1\t2.5\n0\t0.25\n");
    Wfst fst = ReadFstText(in, "<test>");
    CHECK(fst.Final(0) == Weight(0.25));
    CHECK(fst.Arcs(0)[0].weight == Weight(2.5));
  }
  SUBCASE("three fields is an error") {
    std::istringstream in("0\t1\t2\n");
    CHECK_THROWS_AS(ReadFstText(in, "<test>"), FormatError);
  }
  SUBCASE("non-numeric field is an error with location") {
    std::istringstream in("0\tx\t1\t1\n");
    try {
      ReadFstText(in, "somefile");
      FAIL("expected FormatError");
    } catch (const FormatError &e) {
      CHECK(std::string(e.what()).find("somefile:1") != std::string::npos);
    }
  }
  SUBCASE("empty input is the empty machine") {
    std::istringstream in("");
    CHECK(ReadFstText(in, "<test>").Empty());
  }
}

TEST_CASE("symbol table") {
  SymbolTable syms;
  CHECK(syms.AddSymbol("<eps>") == 0);
  CHECK(syms.AddSymbol("a") == 1);
  CHECK(syms.AddSymbol("b") == 2);
  CHECK(syms.AddSymbol("a") == 1);  // existing symbol keeps its id
  CHECK(syms.NumSymbols() == 3);
  CHECK(syms.Find("b").value() == 2);
  CHECK_FALSE(syms.Find("c").has_value());
  CHECK(syms.Name(2) == "b");

  std::ostringstream out;
  syms.WriteText(out);
  CHECK(out.str() == "<eps>\t0\na\t1\nb\t2\n");
  std::istringstream in(out.str());
  SymbolTable read = SymbolTable::ReadText(in, "<test>");
  CHECK(read.NumSymbols() == 3);
  CHECK(read.Find("a").value() == 1);

  std::istringstream bad("x\t3\n");
  CHECK_THROWS_AS(SymbolTable::ReadText(bad, "<test>"), FormatError);
}
