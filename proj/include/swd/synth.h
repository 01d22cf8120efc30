// swd/synth.h

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

#ifndef SWD_SYNTH_H_
#define SWD_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "swd/lexicon.h"
#include "swd/posterior.h"

namespace swd {

/// Knobs for the spiky synthetic posteriors. Each reference token gets one
/// spike frame carrying spike_prob of its mass; neighbor_leak of the
/// token's mass lands on each adjacent frame; noise_floor is spread
/// uniformly over the vocabulary everywhere; remaining mass goes to blank.
/// Blank run lengths between spikes are Poisson with mean blank_run_mean
/// (forced >= 1 between equal consecutive tokens so the collapse relation
/// can separate them).
struct SynthConfig {
  int32_t vocab_size = 50;  // posterior columns, blank included (column 0)
  double blank_run_mean = 6.0;
  double spike_prob = 0.7;
  double neighbor_leak = 0.1;
  double noise_floor = 0.05;
  uint64_t seed = 0;
};

struct SynthUtterance {
  std::string utt_id;
  PosteriorMatrix matrix;
  std::vector<std::string> reference_words;
  std::vector<int32_t> reference_tokens;       // vocabulary column indices
  std::vector<std::string> reference_token_names;
  std::vector<int32_t> planted_spike_frames;   // strictly increasing
};

/// Generates one utterance per corpus line (whitespace-tokenized words,
/// spelled through the lexicon). Fully reproducible from config.seed; each
/// utterance uses an independently derived stream, so generation can be
/// partitioned without changing the output. Throws FormatError on
/// out-of-lexicon words and std::invalid_argument on a config whose masses
/// exceed 1.
std::vector<SynthUtterance> GenerateCorpus(
    const SynthConfig &config, const std::vector<std::string> &corpus_lines,
    const Lexicon &lexicon);

}  // namespace swd

#endif  // SWD_SYNTH_H_
