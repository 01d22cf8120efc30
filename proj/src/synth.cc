// swd/synth.cc

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

#include "swd/synth.h"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "swd/errors.h"
#include "swd/graph-build.h"

namespace swd {

namespace {

// Probabilities are floored before logging so degenerate configs (e.g.
// spike_prob = 1) still produce finite log values.
constexpr double kProbFloor = 1e-10;

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from the engine's raw 64-bit output; pinned by the
// standard, unlike the std distributions.
double NextUniform(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Knuth's product-of-uniforms Poisson sampler; exact and portable for the
// small means used here.
int32_t NextPoisson(std::mt19937_64 &rng, double mean) {
  if (mean <= 0.0) return 0;
  const double limit = std::exp(-mean);
  int32_t k = 0;
  double product = NextUniform(rng);
  while (product > limit) {
    ++k;
    product *= NextUniform(rng);
  }
  return k;
}

std::vector<std::string> SplitWords(const std::string &line) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == '\r') {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

}  // namespace

std::vector<SynthUtterance> GenerateCorpus(
    const SynthConfig &config, const std::vector<std::string> &corpus_lines,
    const Lexicon &lexicon) {
  if (config.spike_prob + 2.0 * config.neighbor_leak + config.noise_floor >
      1.0 + 1e-12) {
    throw std::invalid_argument(
        "spike_prob + 2*neighbor_leak + noise_floor must be <= 1");
  }
  if (config.blank_run_mean < 0.0) {
    throw std::invalid_argument("blank_run_mean must be >= 0");
  }
  if (config.spike_prob <= 0.0 || config.neighbor_leak < 0.0 ||
      config.noise_floor < 0.0) {
    throw std::invalid_argument("probability masses must be non-negative");
  }

  SymbolTable token_syms = MakeTokenSymbols(lexicon);
  const int32_t vocab = config.vocab_size;
  if (vocab < token_syms.NumSymbols() - 1) {
    throw std::invalid_argument(
        "vocab_size " + std::to_string(vocab) + " too small for " +
        std::to_string(token_syms.NumSymbols() - 2) + " lexicon tokens plus blank");
  }
  std::map<std::string, const LexiconEntry *> words;
  for (const LexiconEntry &entry : lexicon.entries) {
    words.emplace(entry.word, &entry);
  }

  std::vector<SynthUtterance> corpus;
  corpus.reserve(corpus_lines.size());
  for (size_t line_idx = 0; line_idx < corpus_lines.size(); ++line_idx) {
    SynthUtterance utt;
    char id[32];
    std::snprintf(id, sizeof(id), "utt%04zu", line_idx);
    utt.utt_id = id;
    utt.reference_words = SplitWords(corpus_lines[line_idx]);
    for (const std::string &word : utt.reference_words) {
      auto it = words.find(word);
      if (it == words.end()) {
        throw FormatError("corpus word \"" + word + "\" is not in the lexicon");
      }
      for (const std::string &token : it->second->tokens) {
        Label token_id = *token_syms.Find(token);
        utt.reference_tokens.push_back(token_id - 1);  // symbol id -> column
        utt.reference_token_names.push_back(token);
      }
    }

    std::mt19937_64 rng(SplitMix64(config.seed ^ SplitMix64(line_idx + 1)));
    const auto &tokens = utt.reference_tokens;

    // Blank run before, between, and after the spikes; a run between equal
    // consecutive tokens must be non-empty or collapse would merge them.
    std::vector<int32_t> runs(tokens.size() + 1);
    for (size_t i = 0; i < runs.size(); ++i) {
      runs[i] = NextPoisson(rng, config.blank_run_mean);
      if (i > 0 && i < tokens.size() && tokens[i] == tokens[i - 1]) {
        runs[i] = std::max(runs[i], 1);
      }
    }
    int32_t num_frames = static_cast<int32_t>(tokens.size());
    for (int32_t run : runs) num_frames += run;
    if (num_frames == 0) num_frames = 1;  // all-blank utterance for empty lines

    int32_t frame = 0;
    for (size_t i = 0; i < tokens.size(); ++i) {
      frame += runs[i];
      utt.planted_spike_frames.push_back(frame++);
    }

    // Row masses in probability space; leaks transfer mass from blank to
    // the adjacent spike's token, keeping every row summing to one.
    std::vector<std::vector<double>> probs(
        num_frames, std::vector<double>(vocab, config.noise_floor / vocab));
    const double body = 1.0 - config.noise_floor;
    for (int32_t t = 0; t < num_frames; ++t) probs[t][0] += body;
    for (size_t i = 0; i < tokens.size(); ++i) {
      int32_t s = utt.planted_spike_frames[i];
      int32_t token = tokens[i];
      probs[s][token] += config.spike_prob;
      probs[s][0] -= config.spike_prob;
      for (int32_t nb : {s - 1, s + 1}) {
        if (nb < 0 || nb >= num_frames) continue;
        probs[nb][token] += config.neighbor_leak;
        probs[nb][0] -= config.neighbor_leak;
      }
    }

    utt.matrix = PosteriorMatrix(num_frames, vocab, /*blank_id=*/0);
    for (int32_t t = 0; t < num_frames; ++t) {
      double sum = 0.0;
      for (int32_t v = 0; v < vocab; ++v) {
        probs[t][v] = std::max(probs[t][v], kProbFloor);
        sum += probs[t][v];
      }
      for (int32_t v = 0; v < vocab; ++v) {
        utt.matrix.Set(t, v, static_cast<float>(std::log(probs[t][v] / sum)));
      }
    }
    corpus.push_back(std::move(utt));
  }
  return corpus;
}

}  // namespace swd
