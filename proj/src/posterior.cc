// swd/posterior.cc

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

#include "swd/posterior.h"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "swd/errors.h"

namespace swd {

namespace {

constexpr char kMagic[4] = {'C', 'T', 'C', 'P'};
constexpr uint16_t kVersion = 1;
constexpr double kNormalizationTolerance = 1e-5;

void PutU16(std::string *out, uint16_t v) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
}

void PutU32(std::string *out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class ByteReader {
 public:
  ByteReader(std::string_view bytes, const std::string &source)
      : bytes_(bytes), source_(source) {}

  size_t Offset() const { return offset_; }

  void Require(size_t n, const char *what) {
    if (offset_ + n > bytes_.size()) {
      throw FormatError(source_ + ": truncated while reading " + what +
                        " at byte offset " + std::to_string(offset_) +
                        " (need " + std::to_string(n) + " bytes, have " +
                        std::to_string(bytes_.size() - offset_) + ")");
    }
  }

  uint8_t Byte() { return static_cast<uint8_t>(bytes_[offset_++]); }

  uint16_t U16(const char *what) {
    Require(2, what);
    uint16_t v = Byte();
    v |= static_cast<uint16_t>(Byte()) << 8;
    return v;
  }

  uint32_t U32(const char *what) {
    Require(4, what);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(Byte()) << (8 * i);
    return v;
  }

  float F32(const char *what) { return std::bit_cast<float>(U32(what)); }

  bool AtEnd() const { return offset_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::string source_;
  size_t offset_ = 0;
};

}  // namespace

void PosteriorMatrix::SetRow(int32_t frame, std::span<const float> row) {
  for (int32_t v = 0; v < vocab_size_; ++v) Set(frame, v, row[v]);
}

int32_t PosteriorMatrix::ArgmaxRow(int32_t frame) const {
  int32_t best = 0;
  float best_value = Value(frame, 0);
  for (int32_t v = 1; v < vocab_size_; ++v) {
    if (Value(frame, v) > best_value) {
      best_value = Value(frame, v);
      best = v;
    }
  }
  return best;
}

double PosteriorMatrix::RowLogSumExp(int32_t frame) const {
  double max = -std::numeric_limits<double>::infinity();
  for (int32_t v = 0; v < vocab_size_; ++v) max = std::max<double>(max, Value(frame, v));
  if (!std::isfinite(max)) return max;
  double sum = 0.0;
  for (int32_t v = 0; v < vocab_size_; ++v) {
    sum += std::exp(static_cast<double>(Value(frame, v)) - max);
  }
  return max + std::log(sum);
}

ValidationReport Validate(const PosteriorMatrix &matrix) {
  ValidationReport report;
  if (matrix.VocabSize() < 1) {
    report.ok = false;
    report.message = "vocab_size must be at least 1";
    return report;
  }
  if (matrix.BlankId() < 0 || matrix.BlankId() >= matrix.VocabSize()) {
    report.ok = false;
    report.message = "blank_id " + std::to_string(matrix.BlankId()) +
                     " out of range [0, " + std::to_string(matrix.VocabSize()) + ")";
    return report;
  }
  for (int32_t t = 0; t < matrix.NumFrames(); ++t) {
    for (int32_t v = 0; v < matrix.VocabSize(); ++v) {
      float value = matrix.Value(t, v);
      if (!std::isfinite(value) || value > 0.0f) {
        report.ok = false;
        report.frame = t;
        report.index = v;
        report.message = "value at frame " + std::to_string(t) + ", index " +
                         std::to_string(v) + " is " + std::to_string(value) +
                         " (must be finite and <= 0)";
        return report;
      }
    }
    double lse = matrix.RowLogSumExp(t);
    if (std::fabs(lse) > kNormalizationTolerance) {
      report.ok = false;
      report.frame = t;
      report.message = "frame " + std::to_string(t) +
                       " is not normalized: log-sum-exp = " + std::to_string(lse);
      return report;
    }
  }
  return report;
}

std::string WritePosteriors(const PosteriorMatrix &matrix) {
  std::string out;
  out.reserve(18 + static_cast<size_t>(matrix.NumFrames()) * matrix.VocabSize() * 4);
  out.append(kMagic, 4);
  PutU16(&out, kVersion);
  PutU32(&out, static_cast<uint32_t>(matrix.NumFrames()));
  PutU32(&out, static_cast<uint32_t>(matrix.VocabSize()));
  PutU32(&out, static_cast<uint32_t>(matrix.BlankId()));
  for (int32_t t = 0; t < matrix.NumFrames(); ++t) {
    for (int32_t v = 0; v < matrix.VocabSize(); ++v) {
      PutU32(&out, std::bit_cast<uint32_t>(matrix.Value(t, v)));
    }
  }
  return out;
}

PosteriorMatrix ReadPosteriors(std::string_view bytes,
                               const std::string &source) {
  ByteReader reader(bytes, source);
  reader.Require(4, "magic");
  for (char expected : kMagic) {
    if (static_cast<char>(reader.Byte()) != expected) {
      throw FormatError(source + ": bad magic at byte offset " +
                        std::to_string(reader.Offset() - 1) +
                        " (not a CTCP posterior file)");
    }
  }
  uint16_t version = reader.U16("version");
  if (version != kVersion) {
    throw FormatError(source + ": unsupported format version " +
                      std::to_string(version) + " at byte offset 4");
  }
  uint32_t num_frames = reader.U32("num_frames");
  uint32_t vocab_size = reader.U32("vocab_size");
  uint32_t blank_id = reader.U32("blank_id");
  if (vocab_size == 0 || vocab_size > (1u << 24) || num_frames > (1u << 28)) {
    throw FormatError(source + ": implausible shape " +
                      std::to_string(num_frames) + "x" +
                      std::to_string(vocab_size) + " in header");
  }
  if (blank_id >= vocab_size) {
    throw FormatError(source + ": blank_id " + std::to_string(blank_id) +
                      " out of range for vocab_size " + std::to_string(vocab_size));
  }
  PosteriorMatrix matrix(static_cast<int32_t>(num_frames),
                         static_cast<int32_t>(vocab_size),
                         static_cast<int32_t>(blank_id));
  for (uint32_t t = 0; t < num_frames; ++t) {
    for (uint32_t v = 0; v < vocab_size; ++v) {
      matrix.Set(static_cast<int32_t>(t), static_cast<int32_t>(v), reader.F32("values"));
    }
  }
  if (!reader.AtEnd()) {
    throw FormatError(source + ": " +
                      std::to_string(bytes.size() - reader.Offset()) +
                      " trailing bytes at offset " + std::to_string(reader.Offset()));
  }
  return matrix;
}

void WritePosteriorsFile(const PosteriorMatrix &matrix,
                         const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  std::string bytes = WritePosteriors(matrix);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

PosteriorMatrix ReadPosteriorsFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ReadPosteriors(buf.str(), path);
}

}  // namespace swd
