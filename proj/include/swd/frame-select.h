// swd/frame-select.h

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

#ifndef SWD_FRAME_SELECT_H_
#define SWD_FRAME_SELECT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "swd/posterior.h"

namespace swd {

// Which neighbors of each spike the window includes. The window
// coefficient K is 1 for one-sided windows and 2 for both sides; it is
// derived, never user-supplied, so the frame-count bound stays consistent
// with the window shape.
enum class WindowSide { kLeft, kRight, kBoth };

struct SwdConfig {
  int32_t window_w = 1;  // neighbors taken on each included side
  WindowSide side = WindowSide::kBoth;

  int32_t WindowCoefficient() const { return side == WindowSide::kBoth ? 2 : 1; }
};

struct SelectionStats {
  int32_t total_frames = 0;    // T
  int32_t spike_count = 0;     // N, frames whose argmax is non-blank
  int32_t selected_count = 0;
  int32_t bound_l_swd = 0;     // N * (K * W + 1); equals selected_count for
                               // strategies without a window
};

enum class StrategyKind { kDense, kSwd, kLsd, kDiscard, kAverage };

struct Strategy {
  StrategyKind kind = StrategyKind::kDense;
  SwdConfig swd;               // kSwd only
  double lsd_threshold = 1.0;  // kLsd only: keep frames with blank prob <= this

  // Grammar name(:arg)*: dense | swd:<left|right|both>:<w> |
  // lsd:<threshold> | discard | average.
  static Strategy Parse(const std::string &spec);
  std::string ToString() const;
};

struct FrameSelection {
  std::vector<int32_t> indices;  // strictly increasing, within [0, T)
  Strategy strategy;
  SelectionStats stats;
};

/// Shorter posterior produced by blank-run averaging; source_frames[i] is
/// the [begin, end) range of original frames behind reduced frame i, and
/// the ranges cover [0, T) exactly once in order.
struct ReducedPosterior {
  PosteriorMatrix matrix;
  std::vector<std::pair<int32_t, int32_t>> source_frames;
};

// Frames whose argmax over the vocabulary is not the blank unit, in
// increasing order. Argmax ties break toward the lowest index.
std::vector<int32_t> DetectSpikes(const PosteriorMatrix &matrix);

// Expands each spike s to s and its w neighbors on the configured side(s).
// No clipping or deduplication; out-of-range candidates are kept for the
// post-processing step.
std::vector<int32_t> SpikeWindow(const std::vector<int32_t> &spikes,
                                 const SwdConfig &config);

// Clips candidates to [0, total_frames), deduplicates, sorts, and fills the
// selection statistics from the spike count and window shape.
FrameSelection PostProcess(const std::vector<int32_t> &candidates,
                           int32_t total_frames, int32_t spike_count,
                           const SwdConfig &config);

// The frame-count bound N * (K * W + 1) on a spike-window selection.
int64_t SwdBound(int64_t spike_count, int64_t window_coefficient,
                 int64_t window_w);

FrameSelection SelectSwd(const PosteriorMatrix &matrix, const SwdConfig &config);

// Keeps frame t iff exp(matrix[t][blank]) <= blank_threshold.
FrameSelection SelectLsd(const PosteriorMatrix &matrix, double blank_threshold);

// Keeps exactly the spike frames (equivalent to a zero-width window).
FrameSelection SelectDiscard(const PosteriorMatrix &matrix);

FrameSelection SelectDense(const PosteriorMatrix &matrix);

// Replaces each maximal run of blank-argmax frames by one frame holding the
// arithmetic mean of the run's probability rows (averaged in probability
// space, then re-logged); non-blank frames pass through.
ReducedPosterior ReduceAverage(const PosteriorMatrix &matrix);

// Dispatch on a parsed strategy. kAverage has no index-set form; use
// ReduceAverage for it (this throws std::invalid_argument).
FrameSelection SelectFrames(const PosteriorMatrix &matrix, const Strategy &strategy);

}  // namespace swd

#endif  // SWD_FRAME_SELECT_H_
