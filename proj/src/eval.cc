// swd/eval.cc

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

#include "swd/eval.h"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace swd {

namespace {

template <typename T>
EditCounts LevenshteinImpl(const std::vector<T> &ref, const std::vector<T> &hyp) {
  const size_t n = ref.size(), m = hyp.size();
  std::vector<std::vector<int64_t>> d(n + 1, std::vector<int64_t>(m + 1, 0));
  for (size_t i = 0; i <= n; ++i) d[i][0] = static_cast<int64_t>(i);
  for (size_t j = 0; j <= m; ++j) d[0][j] = static_cast<int64_t>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      int64_t sub = d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      d[i][j] = std::min({sub, d[i - 1][j] + 1, d[i][j - 1] + 1});
    }
  }

  EditCounts counts;
  counts.distance = d[n][m];
  // Traceback; ties prefer substitution, then deletion, then insertion.
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && d[i][j] == d[i - 1][j - 1]) {
      --i, --j;
    } else if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + 1) {
      ++counts.substitutions;
      --i, --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ++counts.deletions;
      --i;
    } else {
      ++counts.insertions;
      --j;
    }
  }
  return counts;
}

}  // namespace

EditCounts Levenshtein(const std::vector<std::string> &ref,
                       const std::vector<std::string> &hyp) {
  return LevenshteinImpl(ref, hyp);
}

EditCounts Levenshtein(const std::vector<int32_t> &ref,
                       const std::vector<int32_t> &hyp) {
  return LevenshteinImpl(ref, hyp);
}

std::vector<std::string> SplitUnits(const std::string &text, ScoreUnit unit) {
  std::vector<std::string> units;
  if (unit == ScoreUnit::kToken) {
    std::string cur;
    for (char c : text) {
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        if (!cur.empty()) units.push_back(std::move(cur));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) units.push_back(std::move(cur));
    return units;
  }
  // UTF-8 code points; whitespace is not a scoring unit.
  for (size_t i = 0; i < text.size();) {
    unsigned char lead = static_cast<unsigned char>(text[i]);
    size_t len = lead < 0x80 ? 1 : lead < 0xe0 ? 2 : lead < 0xf0 ? 3 : 4;
    if (lead >= 0x80 && lead < 0xc0) len = 1;  // stray continuation byte
    len = std::min(len, text.size() - i);
    std::string unit_str = text.substr(i, len);
    i += len;
    if (unit_str.size() == 1 &&
        (unit_str[0] == ' ' || unit_str[0] == '\t' || unit_str[0] == '\r' ||
         unit_str[0] == '\n')) {
      continue;
    }
    units.push_back(std::move(unit_str));
  }
  return units;
}

ScoreReport ScoreCorpus(
    const std::vector<std::pair<std::string, std::string>> &refs,
    const std::vector<std::pair<std::string, std::string>> &hyps,
    ScoreUnit unit) {
  std::map<std::string, std::string> hyp_by_id(hyps.begin(), hyps.end());
  ScoreReport report;
  for (const auto &[utt_id, ref_text] : refs) {
    UtteranceScore score;
    score.utt_id = utt_id;
    std::vector<std::string> ref_units = SplitUnits(ref_text, unit);
    score.reference_length = static_cast<int64_t>(ref_units.size());
    auto it = hyp_by_id.find(utt_id);
    if (it == hyp_by_id.end()) {
      score.missing_hypothesis = true;
      score.counts.distance = score.reference_length;
      score.counts.deletions = score.reference_length;
      ++report.missing_hypotheses;
    } else {
      score.counts = Levenshtein(ref_units, SplitUnits(it->second, unit));
    }
    report.substitutions += score.counts.substitutions;
    report.insertions += score.counts.insertions;
    report.deletions += score.counts.deletions;
    report.reference_length += score.reference_length;
    report.per_utterance.push_back(std::move(score));
  }
  int64_t errors = report.substitutions + report.insertions + report.deletions;
  report.cer = 100.0 * static_cast<double>(errors) /
               static_cast<double>(std::max<int64_t>(report.reference_length, 1));
  return report;
}

BenchReport BenchCompare(const std::vector<StrategyRun> &runs,
                         const std::string &baseline_name) {
  const StrategyRun *baseline = nullptr;
  for (const StrategyRun &run : runs) {
    if (run.name == baseline_name) baseline = &run;
  }
  if (baseline == nullptr) {
    throw std::invalid_argument("baseline strategy \"" + baseline_name +
                                "\" is not among the runs");
  }
  std::set<std::string> baseline_ids;
  for (const RunRecord &rec : baseline->records) baseline_ids.insert(rec.utt_id);
  for (const StrategyRun &run : runs) {
    std::set<std::string> ids;
    for (const RunRecord &rec : run.records) ids.insert(rec.utt_id);
    if (ids != baseline_ids) {
      throw std::invalid_argument("strategy \"" + run.name +
                                  "\" decoded a different utterance set than "
                                  "the baseline");
    }
  }

  double baseline_ms = 0.0;
  for (const RunRecord &rec : baseline->records) baseline_ms += rec.wall_ms;

  BenchReport report;
  report.baseline = baseline_name;
  for (const StrategyRun &run : runs) {
    BenchEntry entry;
    entry.name = run.name;
    for (const RunRecord &rec : run.records) {
      entry.total_wall_ms += rec.wall_ms;
      entry.frames_decoded += rec.frames_decoded;
      entry.total_frames += rec.total_frames;
    }
    entry.speedup = entry.total_wall_ms > 0.0 ? baseline_ms / entry.total_wall_ms
                                              : 1.0;
    entry.frame_reduction =
        entry.frames_decoded > 0
            ? static_cast<double>(entry.total_frames) /
                  static_cast<double>(entry.frames_decoded)
            : 1.0;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace swd
