// swd/posterior.h

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

#ifndef SWD_POSTERIOR_H_
#define SWD_POSTERIOR_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace swd {

/// Per-frame log-probability grid (natural log), frames by vocabulary
/// entries, row-major. Column blank_id holds the blank unit. Treat as
/// immutable once shared; decoders only read it.
class PosteriorMatrix {
 public:
  PosteriorMatrix() = default;
  PosteriorMatrix(int32_t num_frames, int32_t vocab_size, int32_t blank_id = 0)
      : num_frames_(num_frames),
        vocab_size_(vocab_size),
        blank_id_(blank_id),
        values_(static_cast<size_t>(num_frames) * vocab_size, 0.0f) {}

  int32_t NumFrames() const { return num_frames_; }
  int32_t VocabSize() const { return vocab_size_; }
  int32_t BlankId() const { return blank_id_; }

  float Value(int32_t frame, int32_t index) const {
    return values_[static_cast<size_t>(frame) * vocab_size_ + index];
  }
  void Set(int32_t frame, int32_t index, float value) {
    values_[static_cast<size_t>(frame) * vocab_size_ + index] = value;
  }
  std::span<const float> Row(int32_t frame) const {
    return {values_.data() + static_cast<size_t>(frame) * vocab_size_,
            static_cast<size_t>(vocab_size_)};
  }
  void SetRow(int32_t frame, std::span<const float> row);

  // Vocabulary index with the largest log-probability; ties break toward
  // the lowest index.
  int32_t ArgmaxRow(int32_t frame) const;
  double RowLogSumExp(int32_t frame) const;

  bool operator==(const PosteriorMatrix &other) const = default;

 private:
  int32_t num_frames_ = 0;
  int32_t vocab_size_ = 0;
  int32_t blank_id_ = 0;
  std::vector<float> values_;
};

struct ValidationReport {
  bool ok = true;
  std::string message;
  int32_t frame = -1;
  int32_t index = -1;
};

/// Checks the matrix invariants: every value finite and <= 0, every frame
/// normalized (log-sum-exp within 1e-5 of 0), blank_id in range. Violations
/// are reported, not thrown; the report names the first offending cell.
ValidationReport Validate(const PosteriorMatrix &matrix);

// Binary format: magic "CTCP", u16 version (1), u32 num_frames, u32
// vocab_size, u32 blank_id, then num_frames * vocab_size little-endian
// 32-bit floats, frame-major. All integers little-endian.
std::string WritePosteriors(const PosteriorMatrix &matrix);
PosteriorMatrix ReadPosteriors(std::string_view bytes,
                               const std::string &source = "<bytes>");

void WritePosteriorsFile(const PosteriorMatrix &matrix,
                         const std::string &path);
PosteriorMatrix ReadPosteriorsFile(const std::string &path);

}  // namespace swd

#endif  // SWD_POSTERIOR_H_
