// swd/decoder.h

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

#ifndef SWD_DECODER_H_
#define SWD_DECODER_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "swd/frame-select.h"
#include "swd/graph-build.h"
#include "swd/posterior.h"

namespace swd {

struct Beam {
  double beam_width = 16.0;   // cost margin above the frame's best token
  int32_t max_active = 7000;  // surviving hypotheses per frame
};

struct DecodeResult {
  std::vector<std::string> words;
  std::vector<Label> word_ids;
  std::vector<Label> tokens;  // input label consumed per decoded frame
  double total_cost = 0.0;
  int32_t frames_decoded = 0;
  int32_t total_frames = 0;
  double wall_ms = 0.0;
  // Set when no hypothesis reached a final state and the best non-final
  // token was returned instead.
  bool flagged_nonfinal = false;
};

/// Frame-synchronous Viterbi beam search over the bundle's graph,
/// consuming only the selected frames in increasing order. Per frame,
/// non-epsilon arcs are expanded with graph cost plus
/// -ac_scale * logprob(ilabel), epsilon arcs are closed over, then tokens
/// outside best + beam_width or beyond max_active are pruned (cost order,
/// ties by state id). Throws DecodeError if no token survives a frame.
DecodeResult Decode(const GraphBundle &bundle, const PosteriorMatrix &matrix,
                    const FrameSelection &selection, const Beam &beam,
                    double ac_scale = 1.0);

// Decode over an averaged (reduced) posterior: all reduced frames are
// consumed; total_frames reports the original frame count.
DecodeResult Decode(const GraphBundle &bundle, const ReducedPosterior &reduced,
                    const Beam &beam, double ac_scale = 1.0);

// Graph-free baseline: per-frame argmax, collapse repeats, strip blanks.
// Returns vocabulary column indices.
std::vector<int32_t> GreedyCtc(const PosteriorMatrix &matrix);

struct BatchItem {
  std::string utt_id;
  PosteriorMatrix matrix;
};

struct BatchResult {
  std::vector<std::string> utt_ids;
  std::vector<DecodeResult> results;   // slot valid iff errors[i] is empty
  std::vector<std::string> errors;
  double total_wall_ms = 0.0;          // sum of per-utterance wall times
  double elapsed_ms = 0.0;             // batch wall time
};

/// Applies the selection strategy and decodes each utterance, optionally
/// across `jobs` worker threads. Outputs and their order are independent
/// of the parallelism; per-utterance wall time covers selection plus
/// search. Errors are collected per utterance, not thrown.
BatchResult DecodeBatch(const GraphBundle &bundle,
                        const std::vector<BatchItem> &utterances,
                        const Strategy &strategy, const Beam &beam,
                        double ac_scale = 1.0, int32_t jobs = 1);

// JSON-lines results: {utt_id, words, text, total_cost, frames_decoded,
// total_frames, wall_ms, flagged_nonfinal}, or {utt_id, error} for failed
// utterances.
void WriteResultsJsonl(const BatchResult &batch, std::ostream &out);

}  // namespace swd

#endif  // SWD_DECODER_H_
