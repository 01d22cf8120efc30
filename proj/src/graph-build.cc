// swd/graph-build.cc

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

#include "swd/graph-build.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "swd/errors.h"

namespace swd {

namespace {

constexpr double kLn10 = 2.302585092994046;
const char *const kSentenceStart = "<s>";
const char *const kSentenceEnd = "</s>";

// -ln probability from an ARPA log10 value, scaled.
Weight LmCost(double log10_value, double scale) {
  return Weight(-log10_value * kLn10 * scale);
}

}  // namespace

SymbolTable MakeTokenSymbols(const Lexicon &lexicon) {
  SymbolTable syms;
  syms.AddSymbol("<eps>");
  syms.AddSymbol(kBlankSymbol);
  for (const LexiconEntry &entry : lexicon.entries) {
    for (const std::string &token : entry.tokens) syms.AddSymbol(token);
  }
  return syms;
}

SymbolTable MakeWordSymbols(const Lexicon &lexicon) {
  SymbolTable syms;
  syms.AddSymbol("<eps>");
  for (const LexiconEntry &entry : lexicon.entries) syms.AddSymbol(entry.word);
  return syms;
}

BuildRecipe ParseRecipe(const std::string &name) {
  if (name == "det-min") return BuildRecipe::kDetMin;
  if (name == "det-push-min") return BuildRecipe::kDetPushMin;
  throw std::invalid_argument("unknown recipe \"" + name +
                              "\"; expected det-min or det-push-min");
}

std::string RecipeName(BuildRecipe recipe) {
  return recipe == BuildRecipe::kDetMin ? "det-min" : "det-push-min";
}

LexiconFst BuildLexiconFst(const Lexicon &lexicon, SymbolTable *token_syms,
                           const SymbolTable &word_syms) {
  if (lexicon.entries.empty()) {
    throw FormatError("lexicon is empty");
  }

  // Token-id spellings, validated against the table.
  std::vector<std::vector<Label>> spellings;
  spellings.reserve(lexicon.entries.size());
  for (const LexiconEntry &entry : lexicon.entries) {
    if (entry.tokens.empty()) {
      throw FormatError("word \"" + entry.word + "\" has an empty token sequence");
    }
    std::vector<Label> ids;
    for (const std::string &token : entry.tokens) {
      auto id = token_syms->Find(token);
      if (!id) {
        throw FormatError("token \"" + token + "\" of word \"" + entry.word +
                          "\" is not in the token table");
      }
      ids.push_back(*id);
    }
    spellings.push_back(std::move(ids));
  }

  // Words sharing a spelling, and words whose spelling prefixes another
  // word's, need a disambiguating auxiliary symbol or L o G cannot be
  // determinized.
  std::map<std::vector<Label>, int32_t> counts;
  std::set<std::vector<Label>> prefixes;
  for (const auto &spelling : spellings) {
    ++counts[spelling];
    for (size_t len = 1; len < spelling.size(); ++len) {
      prefixes.insert(std::vector<Label>(spelling.begin(), spelling.begin() + len));
    }
  }
  std::map<std::vector<Label>, int32_t> next_rank;
  std::vector<int32_t> aux_of(spellings.size(), 0);
  int32_t max_aux = 0;
  for (size_t i = 0; i < spellings.size(); ++i) {
    const auto &spelling = spellings[i];
    if (counts[spelling] > 1) {
      aux_of[i] = ++next_rank[spelling];
    } else if (prefixes.count(spelling)) {
      aux_of[i] = 1;
    }
    max_aux = std::max(max_aux, aux_of[i]);
  }

  LexiconFst result;
  result.num_aux = max_aux;
  if (max_aux > 0) {
    for (int32_t k = 1; k <= max_aux; ++k) {
      Label id = token_syms->AddSymbol("#" + std::to_string(k));
      if (k == 1) result.first_aux = id;
    }
  }

  Wfst &fst = result.fst;
  StateId start = fst.AddState();
  fst.SetStart(start);
  fst.SetFinal(start, Weight::One());
  for (size_t i = 0; i < spellings.size(); ++i) {
    const LexiconEntry &entry = lexicon.entries[i];
    const auto &spelling = spellings[i];
    Label word_id = *word_syms.Find(entry.word);
    StateId cur = start;
    for (size_t k = 0; k < spelling.size(); ++k) {
      bool last_arc = (k + 1 == spelling.size()) && aux_of[i] == 0;
      StateId next = last_arc ? start : fst.AddState();
      fst.AddArc(cur, Arc(spelling[k], k == 0 ? word_id : kEpsilon,
                          k == 0 ? Weight(entry.cost) : Weight::One(), next));
      cur = next;
    }
    if (aux_of[i] > 0) {
      Label aux = result.first_aux + aux_of[i] - 1;
      fst.AddArc(cur, Arc(aux, kEpsilon, Weight::One(), start));
    }
  }
  return result;
}

Wfst BuildGrammarFst(const ArpaModel &model, const SymbolTable &word_syms,
                     double lm_scale) {
  Wfst fst;
  if (model.MaxOrder() == 0) return fst;

  using Context = std::vector<std::string>;
  std::map<Context, StateId> states;
  auto context_ok = [](const Context &c) {
    if (!c.empty() && c.back() == kSentenceEnd) return false;
    if (c.size() > 1 && c.back() == kSentenceStart) return false;
    return true;
  };

  // One state per continuable context: every entry below the max order,
  // plus the empty (unigram) context.
  states.emplace(Context{}, fst.AddState());
  for (int32_t order = 1; order < model.MaxOrder(); ++order) {
    for (const NgramEntry &entry : model.Entries(order)) {
      if (!context_ok(entry.words)) continue;
      if (!states.count(entry.words)) states.emplace(entry.words, fst.AddState());
    }
  }

  Context start_context{kSentenceStart};
  if (states.count(start_context)) {
    fst.SetStart(states[start_context]);
  } else {
    fst.SetStart(states[Context{}]);
  }

  // Longest suffix of the full continuation that has a state.
  auto target_state = [&](Context context) {
    if (static_cast<int32_t>(context.size()) >= model.MaxOrder()) {
      context.erase(context.begin(),
                    context.begin() + (context.size() - model.MaxOrder() + 1));
    }
    while (!context.empty() && !states.count(context)) {
      context.erase(context.begin());
    }
    return states[context];
  };

  for (int32_t order = 1; order <= model.MaxOrder(); ++order) {
    for (const NgramEntry &entry : model.Entries(order)) {
      const std::string &word = entry.words.back();
      Context history(entry.words.begin(), entry.words.end() - 1);
      if (word == kSentenceStart) continue;  // nothing predicts <s>
      if (!context_ok(history)) continue;
      auto src_it = states.find(history);
      if (src_it == states.end()) continue;  // e.g. history ends in </s>
      StateId src = src_it->second;
      if (word == kSentenceEnd) {
        fst.SetFinal(src, LmCost(entry.log10_prob, lm_scale));
        continue;
      }
      auto word_id = word_syms.Find(word);
      if (!word_id) {
        throw FormatError("grammar references word \"" + word +
                          "\" which is not in the word table");
      }
      Context continuation = history;
      continuation.push_back(word);
      fst.AddArc(src, Arc(*word_id, *word_id, LmCost(entry.log10_prob, lm_scale),
                          target_state(continuation)));
    }
  }

  // Backoff arcs from each non-empty context to its longest proper suffix.
  std::map<Context, Weight> backoffs;
  for (int32_t order = 1; order < model.MaxOrder(); ++order) {
    for (const NgramEntry &entry : model.Entries(order)) {
      if (entry.log10_backoff) {
        backoffs.emplace(entry.words, LmCost(*entry.log10_backoff, lm_scale));
      }
    }
  }
  for (const auto &[context, state] : states) {
    if (context.empty()) continue;
    Weight backoff = Weight::One();
    if (auto it = backoffs.find(context); it != backoffs.end()) {
      backoff = it->second;
    }
    Context suffix(context.begin() + 1, context.end());
    while (!suffix.empty() && !states.count(suffix)) suffix.erase(suffix.begin());
    fst.AddArc(state, Arc(kEpsilon, kEpsilon, backoff, states[suffix]));
  }
  return fst;
}

Wfst BuildCtcTopology(const SymbolTable &token_syms) {
  if (token_syms.NumSymbols() < 2 ||
      token_syms.Name(kBlankLabel) != kBlankSymbol) {
    throw std::invalid_argument(
        "token table must have <eps> at 0 and <blk> at 1");
  }
  Wfst fst;
  StateId start = fst.AddState();
  fst.SetStart(start);
  fst.SetFinal(start, Weight::One());
  const Label num_syms = token_syms.NumSymbols();

  std::vector<StateId> token_state(num_syms, kNoStateId);
  for (Label v = kBlankLabel + 1; v < num_syms; ++v) {
    token_state[v] = fst.AddState();
    fst.SetFinal(token_state[v], Weight::One());
  }
  fst.AddArc(start, Arc(kBlankLabel, kEpsilon, Weight::One(), start));
  for (Label v = kBlankLabel + 1; v < num_syms; ++v) {
    fst.AddArc(start, Arc(v, v, Weight::One(), token_state[v]));
    fst.AddArc(token_state[v], Arc(v, kEpsilon, Weight::One(), token_state[v]));
    fst.AddArc(token_state[v], Arc(kBlankLabel, kEpsilon, Weight::One(), start));
    for (Label u = kBlankLabel + 1; u < num_syms; ++u) {
      if (u == v) continue;
      fst.AddArc(token_state[v], Arc(u, u, Weight::One(), token_state[u]));
    }
  }
  return fst;
}

Wfst BuildTlg(const Wfst &token_topo, const LexiconFst &lexicon_fst,
              const Wfst &grammar_fst, BuildRecipe recipe,
              TlgBuildStats *stats) {
  Wfst lg = Compose(lexicon_fst.fst, grammar_fst);
  if (stats) {
    stats->lg_states = lg.NumStates();
    stats->lg_arcs = lg.NumArcs();
  }

  LabelEncoder encoder;
  Wfst encoded = EncodeLabels(lg, &encoder);
  Wfst det = Determinize(encoded);
  if (recipe == BuildRecipe::kDetPushMin) {
    det = WeightPush(Connect(det));
  }
  Wfst opt = Minimize(det);
  if (stats) {
    stats->opt_states = opt.NumStates();
    stats->opt_arcs = opt.NumArcs();
  }
  Wfst decoded = DecodeLabels(opt, encoder);

  // Auxiliary disambiguation symbols have served their purpose; they must
  // not reach the decoder's input side.
  if (lexicon_fst.num_aux > 0) {
    for (StateId q = 0; q < decoded.NumStates(); ++q) {
      for (Arc &arc : *decoded.MutableArcs(q)) {
        if (arc.ilabel >= lexicon_fst.first_aux &&
            arc.ilabel < lexicon_fst.first_aux + lexicon_fst.num_aux) {
          arc.ilabel = kEpsilon;
        }
      }
    }
  }

  Wfst tlg = Compose(token_topo, decoded);
  if (stats) {
    stats->tlg_states = tlg.NumStates();
    stats->tlg_arcs = tlg.NumArcs();
  }
  return tlg;
}

GraphBundle BuildGraphBundle(const Lexicon &lexicon, const ArpaModel &model,
                             BuildRecipe recipe, double lm_scale,
                             TlgBuildStats *stats) {
  GraphBundle bundle;
  bundle.recipe = recipe;
  bundle.lm_scale = lm_scale;
  bundle.token_syms = MakeTokenSymbols(lexicon);
  bundle.word_syms = MakeWordSymbols(lexicon);

  SymbolTable tokens_with_aux = bundle.token_syms;
  LexiconFst lexicon_fst =
      BuildLexiconFst(lexicon, &tokens_with_aux, bundle.word_syms);
  Wfst grammar = BuildGrammarFst(model, bundle.word_syms, lm_scale);
  Wfst token_topo = BuildCtcTopology(bundle.token_syms);
  bundle.tlg = BuildTlg(token_topo, lexicon_fst, grammar, recipe, stats);
  return bundle;
}

void SaveGraphBundle(const GraphBundle &bundle, const std::string &dir) {
  std::filesystem::create_directories(dir);
  WriteFstTextFile(bundle.tlg, dir + "/tlg.fst.txt");
  bundle.token_syms.WriteTextFile(dir + "/tokens.syms");
  bundle.word_syms.WriteTextFile(dir + "/words.syms");
  nlohmann::json recipe;
  recipe["recipe"] = RecipeName(bundle.recipe);
  recipe["lm_scale"] = bundle.lm_scale;
  std::ofstream out(dir + "/recipe.json");
  if (!out) throw FormatError("cannot write " + dir + "/recipe.json");
  out << recipe.dump(2) << "\n";
}

GraphBundle LoadGraphBundle(const std::string &dir) {
  GraphBundle bundle;
  bundle.tlg = ReadFstTextFile(dir + "/tlg.fst.txt");
  bundle.token_syms = SymbolTable::ReadTextFile(dir + "/tokens.syms");
  bundle.word_syms = SymbolTable::ReadTextFile(dir + "/words.syms");
  std::ifstream in(dir + "/recipe.json");
  if (!in) throw FormatError("cannot open " + dir + "/recipe.json");
  nlohmann::json recipe;
  try {
    in >> recipe;
    bundle.recipe = ParseRecipe(recipe.at("recipe").get<std::string>());
    bundle.lm_scale = recipe.at("lm_scale").get<double>();
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(dir + "/recipe.json: " + e.what());
  }
  return bundle;
}

}  // namespace swd
