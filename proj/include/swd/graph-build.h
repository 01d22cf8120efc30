// swd/graph-build.h

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

#ifndef SWD_GRAPH_BUILD_H_
#define SWD_GRAPH_BUILD_H_

#include <string>
#include <vector>

#include "swd/arpa.h"
#include "swd/fst-ops.h"
#include "swd/lexicon.h"
#include "swd/wfst.h"

namespace swd {

// Token symbol convention shared by the graph builders, the synthetic
// generator, and the decoder: id 0 is <eps>, id 1 is the blank unit <blk>,
// real tokens follow in lexicon first-appearance order. Posterior column c
// corresponds to token symbol c + 1; column 0 is blank.
inline constexpr Label kBlankLabel = 1;
inline const char *const kBlankSymbol = "<blk>";

SymbolTable MakeTokenSymbols(const Lexicon &lexicon);
// Word ids in lexicon first-appearance order after <eps>; <s> and </s>
// never appear (they have no arcs in G).
SymbolTable MakeWordSymbols(const Lexicon &lexicon);

enum class BuildRecipe { kDetMin, kDetPushMin };

BuildRecipe ParseRecipe(const std::string &name);  // "det-min" | "det-push-min"
std::string RecipeName(BuildRecipe recipe);

struct GraphBundle {
  Wfst tlg;
  SymbolTable token_syms;  // real tokens only, no auxiliary symbols
  SymbolTable word_syms;
  BuildRecipe recipe = BuildRecipe::kDetMin;
  double lm_scale = 1.0;
};

/// Lexicon transducer from token sequences to words, closed over word
/// sequences (last arc returns to the start state, which is final).
/// Homophones and words whose token sequence prefixes another word get
/// auxiliary symbols #1, #2, ... appended on the input side; the symbols
/// are added to token_syms and must be replaced by epsilon after
/// optimization.
struct LexiconFst {
  Wfst fst;
  Label first_aux = 0;  // 0 when no auxiliary symbols were needed
  int32_t num_aux = 0;
};
LexiconFst BuildLexiconFst(const Lexicon &lexicon, SymbolTable *token_syms,
                           const SymbolTable &word_syms);

/// Standard backoff n-gram acceptor over word labels: one state per
/// context, word arcs costed -ln(10^logprob) * lm_scale, epsilon backoff
/// arcs, sentence start as the initial context and sentence-end
/// probabilities folded into final weights.
Wfst BuildGrammarFst(const ArpaModel &model, const SymbolTable &word_syms,
                     double lm_scale = 1.0);

/// CTC collapse topology: maps frame-level token streams (blank and
/// repeats included) to collapsed token sequences. Blank and repeated
/// tokens loop without output; a token change emits.
Wfst BuildCtcTopology(const SymbolTable &token_syms);

struct TlgBuildStats {
  int64_t lg_states = 0, lg_arcs = 0;       // L o G before optimization
  int64_t opt_states = 0, opt_arcs = 0;     // after det(+push)+min
  int64_t tlg_states = 0, tlg_arcs = 0;     // final composed graph
};

/// Assembles the decoding graph: composes L with G, determinizes and
/// minimizes over encoded label pairs (kDetPushMin pushes weights between
/// the two), replaces auxiliary input symbols by epsilon, and composes
/// with the collapse topology. Both recipes accept the same weighted
/// language.
Wfst BuildTlg(const Wfst &token_topo, const LexiconFst &lexicon_fst,
              const Wfst &grammar_fst, BuildRecipe recipe,
              TlgBuildStats *stats = nullptr);

// End-to-end convenience: symbols, T, L, G, TLG.
GraphBundle BuildGraphBundle(const Lexicon &lexicon, const ArpaModel &model,
                             BuildRecipe recipe, double lm_scale = 1.0,
                             TlgBuildStats *stats = nullptr);

// Bundle directory layout: tlg.fst.txt, tokens.syms, words.syms,
// recipe.json (recipe name and LM scale).
void SaveGraphBundle(const GraphBundle &bundle, const std::string &dir);
GraphBundle LoadGraphBundle(const std::string &dir);

}  // namespace swd

#endif  // SWD_GRAPH_BUILD_H_
