// swd/frame-select.cc

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

#include "swd/frame-select.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swd {

namespace {

std::vector<std::string> SplitColons(const std::string &spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : spec) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

[[noreturn]] void BadSpec(const std::string &spec) {
  throw std::invalid_argument(
      "bad strategy spec \"" + spec +
      "\"; expected one of: dense | swd:<left|right|both>:<w> | "
      "lsd:<threshold> | discard | average");
}

}  // namespace

Strategy Strategy::Parse(const std::string &spec) {
  auto parts = SplitColons(spec);
  Strategy strategy;
  if (parts[0] == "dense" && parts.size() == 1) {
    strategy.kind = StrategyKind::kDense;
  } else if (parts[0] == "discard" && parts.size() == 1) {
    strategy.kind = StrategyKind::kDiscard;
  } else if (parts[0] == "average" && parts.size() == 1) {
    strategy.kind = StrategyKind::kAverage;
  } else if (parts[0] == "swd" && parts.size() == 3) {
    strategy.kind = StrategyKind::kSwd;
    if (parts[1] == "left") {
      strategy.swd.side = WindowSide::kLeft;
    } else if (parts[1] == "right") {
      strategy.swd.side = WindowSide::kRight;
    } else if (parts[1] == "both") {
      strategy.swd.side = WindowSide::kBoth;
    } else {
      BadSpec(spec);
    }
    try {
      size_t pos = 0;
      int w = std::stoi(parts[2], &pos);
      if (pos != parts[2].size() || w < 0) BadSpec(spec);
      strategy.swd.window_w = w;
    } catch (const std::invalid_argument &) {
      BadSpec(spec);
    } catch (const std::out_of_range &) {
      BadSpec(spec);
    }
  } else if (parts[0] == "lsd" && parts.size() == 2) {
    strategy.kind = StrategyKind::kLsd;
    try {
      size_t pos = 0;
      double threshold = std::stod(parts[1], &pos);
      if (pos != parts[1].size() || !(threshold > 0.0) || threshold > 1.0) {
        BadSpec(spec);
      }
      strategy.lsd_threshold = threshold;
    } catch (const std::invalid_argument &) {
      BadSpec(spec);
    } catch (const std::out_of_range &) {
      BadSpec(spec);
    }
  } else {
    BadSpec(spec);
  }
  return strategy;
}

std::string Strategy::ToString() const {
  switch (kind) {
    case StrategyKind::kDense:
      return "dense";
    case StrategyKind::kDiscard:
      return "discard";
    case StrategyKind::kAverage:
      return "average";
    case StrategyKind::kLsd:
      return "lsd:" + std::to_string(lsd_threshold);
    case StrategyKind::kSwd: {
      const char *side = swd.side == WindowSide::kLeft    ? "left"
                         : swd.side == WindowSide::kRight ? "right"
                                                          : "both";
      return std::string("swd:") + side + ":" + std::to_string(swd.window_w);
    }
  }
  return "?";
}

std::vector<int32_t> DetectSpikes(const PosteriorMatrix &matrix) {
  std::vector<int32_t> spikes;
  for (int32_t t = 0; t < matrix.NumFrames(); ++t) {
    if (matrix.ArgmaxRow(t) != matrix.BlankId()) spikes.push_back(t);
  }
  return spikes;
}

std::vector<int32_t> SpikeWindow(const std::vector<int32_t> &spikes,
                                 const SwdConfig &config) {
  std::vector<int32_t> candidates;
  const int32_t w = config.window_w;
  candidates.reserve(spikes.size() * (config.WindowCoefficient() * w + 1));
  for (int32_t s : spikes) {
    candidates.push_back(s);
    if (config.side != WindowSide::kRight) {
      for (int32_t d = 1; d <= w; ++d) candidates.push_back(s - d);
    }
    if (config.side != WindowSide::kLeft) {
      for (int32_t d = 1; d <= w; ++d) candidates.push_back(s + d);
    }
  }
  return candidates;
}

int64_t SwdBound(int64_t spike_count, int64_t window_coefficient,
                 int64_t window_w) {
  return spike_count * (window_coefficient * window_w + 1);
}

FrameSelection PostProcess(const std::vector<int32_t> &candidates,
                           int32_t total_frames, int32_t spike_count,
                           const SwdConfig &config) {
  FrameSelection selection;
  selection.strategy.kind = StrategyKind::kSwd;
  selection.strategy.swd = config;
  selection.indices.reserve(candidates.size());
  for (int32_t c : candidates) {
    if (c >= 0 && c < total_frames) selection.indices.push_back(c);
  }
  std::sort(selection.indices.begin(), selection.indices.end());
  selection.indices.erase(
      std::unique(selection.indices.begin(), selection.indices.end()),
      selection.indices.end());
  selection.stats.total_frames = total_frames;
  selection.stats.spike_count = spike_count;
  selection.stats.selected_count = static_cast<int32_t>(selection.indices.size());
  selection.stats.bound_l_swd = static_cast<int32_t>(
      SwdBound(spike_count, config.WindowCoefficient(), config.window_w));
  return selection;
}

FrameSelection SelectSwd(const PosteriorMatrix &matrix,
                         const SwdConfig &config) {
  std::vector<int32_t> spikes = DetectSpikes(matrix);
  return PostProcess(SpikeWindow(spikes, config), matrix.NumFrames(),
                     static_cast<int32_t>(spikes.size()), config);
}

FrameSelection SelectLsd(const PosteriorMatrix &matrix,
                         double blank_threshold) {
  if (!(blank_threshold > 0.0) || blank_threshold > 1.0) {
    throw std::invalid_argument("lsd blank threshold must be in (0, 1]");
  }
  FrameSelection selection;
  selection.strategy.kind = StrategyKind::kLsd;
  selection.strategy.lsd_threshold = blank_threshold;
  int32_t spikes = 0;
  for (int32_t t = 0; t < matrix.NumFrames(); ++t) {
    double blank_prob = std::exp(static_cast<double>(matrix.Value(t, matrix.BlankId())));
    if (blank_prob <= blank_threshold) selection.indices.push_back(t);
    if (matrix.ArgmaxRow(t) != matrix.BlankId()) ++spikes;
  }
  selection.stats.total_frames = matrix.NumFrames();
  selection.stats.spike_count = spikes;
  selection.stats.selected_count = static_cast<int32_t>(selection.indices.size());
  selection.stats.bound_l_swd = selection.stats.selected_count;
  return selection;
}

FrameSelection SelectDiscard(const PosteriorMatrix &matrix) {
  FrameSelection selection;
  selection.indices = DetectSpikes(matrix);
  selection.strategy.kind = StrategyKind::kDiscard;
  selection.stats.total_frames = matrix.NumFrames();
  selection.stats.spike_count = static_cast<int32_t>(selection.indices.size());
  selection.stats.selected_count = selection.stats.spike_count;
  selection.stats.bound_l_swd = selection.stats.spike_count;
  return selection;
}

FrameSelection SelectDense(const PosteriorMatrix &matrix) {
  FrameSelection selection;
  selection.strategy.kind = StrategyKind::kDense;
  selection.indices.resize(matrix.NumFrames());
  for (int32_t t = 0; t < matrix.NumFrames(); ++t) selection.indices[t] = t;
  selection.stats.total_frames = matrix.NumFrames();
  selection.stats.spike_count = static_cast<int32_t>(DetectSpikes(matrix).size());
  selection.stats.selected_count = matrix.NumFrames();
  selection.stats.bound_l_swd = matrix.NumFrames();
  return selection;
}

ReducedPosterior ReduceAverage(const PosteriorMatrix &matrix) {
  const int32_t num_frames = matrix.NumFrames();
  const int32_t vocab = matrix.VocabSize();
  std::vector<std::pair<int32_t, int32_t>> runs;
  for (int32_t t = 0; t < num_frames;) {
    if (matrix.ArgmaxRow(t) == matrix.BlankId()) {
      int32_t end = t + 1;
      while (end < num_frames && matrix.ArgmaxRow(end) == matrix.BlankId()) ++end;
      runs.emplace_back(t, end);
      t = end;
    } else {
      runs.emplace_back(t, t + 1);
      ++t;
    }
  }

  ReducedPosterior reduced;
  reduced.matrix = PosteriorMatrix(static_cast<int32_t>(runs.size()), vocab,
                                   matrix.BlankId());
  reduced.source_frames = runs;
  std::vector<double> probs(vocab);
  for (size_t i = 0; i < runs.size(); ++i) {
    auto [begin, end] = runs[i];
    if (end - begin == 1) {
      reduced.matrix.SetRow(static_cast<int32_t>(i), matrix.Row(begin));
      continue;
    }
    std::fill(probs.begin(), probs.end(), 0.0);
    for (int32_t t = begin; t < end; ++t) {
      for (int32_t v = 0; v < vocab; ++v) {
        probs[v] += std::exp(static_cast<double>(matrix.Value(t, v)));
      }
    }
    for (int32_t v = 0; v < vocab; ++v) {
      reduced.matrix.Set(static_cast<int32_t>(i), v,
                         static_cast<float>(std::log(probs[v] / (end - begin))));
    }
  }
  return reduced;
}

FrameSelection SelectFrames(const PosteriorMatrix &matrix,
                            const Strategy &strategy) {
  switch (strategy.kind) {
    case StrategyKind::kDense:
      return SelectDense(matrix);
    case StrategyKind::kSwd:
      return SelectSwd(matrix, strategy.swd);
    case StrategyKind::kLsd:
      return SelectLsd(matrix, strategy.lsd_threshold);
    case StrategyKind::kDiscard:
      return SelectDiscard(matrix);
    case StrategyKind::kAverage:
      break;
  }
  throw std::invalid_argument(
      "the average strategy reduces the matrix instead of selecting frames; "
      "use ReduceAverage");
}

}  // namespace swd
