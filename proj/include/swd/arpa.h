// swd/arpa.h

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

#ifndef SWD_ARPA_H_
#define SWD_ARPA_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace swd {

struct NgramEntry {
  double log10_prob = 0.0;
  std::vector<std::string> words;
  std::optional<double> log10_backoff;

  bool operator==(const NgramEntry &) const = default;
};

/// Backoff n-gram model as read from ARPA text: per-order entry lists,
/// orders 1..max_order all present, probabilities <= 0 in log10, and every
/// n-gram's length-(k-1) history present at the lower order.
class ArpaModel {
 public:
  explicit ArpaModel(int32_t max_order = 0) : orders_(max_order) {}

  int32_t MaxOrder() const { return static_cast<int32_t>(orders_.size()); }
  const std::vector<NgramEntry> &Entries(int32_t order) const {
    return orders_[order - 1];
  }
  std::vector<NgramEntry> *MutableEntries(int32_t order) {
    return &orders_[order - 1];
  }
  int64_t NumEntries() const;

  // Exact n-gram lookup by linear scan; fine for the model sizes the
  // tests and tools feed it. Bulk consumers should index entries once.
  const NgramEntry *Find(const std::vector<std::string> &words) const;

  bool operator==(const ArpaModel &other) const { return orders_ == other.orders_; }

 private:
  std::vector<std::vector<NgramEntry>> orders_;
};

// Parses ARPA text. Throws FormatError with a line number on malformed
// input: header/entry count mismatches, missing sections, bad
// probabilities, or an n-gram whose history is absent at the lower order.
ArpaModel ParseArpa(std::istream &in, const std::string &source);
ArpaModel ParseArpaFile(const std::string &path);
ArpaModel ParseArpaString(const std::string &text,
                          const std::string &source = "<string>");

// Canonical ARPA text; parsing it back yields an equal model.
std::string EmitArpa(const ArpaModel &model);

}  // namespace swd

#endif  // SWD_ARPA_H_
