// swd/eval.h

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

#ifndef SWD_EVAL_H_
#define SWD_EVAL_H_

#include <cstdint>
#include <string>
#include <vector>

namespace swd {

struct EditCounts {
  int64_t distance = 0;
  int64_t substitutions = 0;
  int64_t insertions = 0;
  int64_t deletions = 0;
};

/// Minimal unit-cost edit distance with one optimal alignment's operation
/// counts; alignment ties prefer substitution, then deletion, then
/// insertion, so counts are deterministic.
EditCounts Levenshtein(const std::vector<std::string> &ref,
                       const std::vector<std::string> &hyp);
EditCounts Levenshtein(const std::vector<int32_t> &ref,
                       const std::vector<int32_t> &hyp);

enum class ScoreUnit { kChar, kToken };

// kChar splits UTF-8 code points; kToken splits on whitespace.
std::vector<std::string> SplitUnits(const std::string &text, ScoreUnit unit);

struct UtteranceScore {
  std::string utt_id;
  EditCounts counts;
  int64_t reference_length = 0;
  bool missing_hypothesis = false;
};

struct ScoreReport {
  int64_t substitutions = 0;
  int64_t insertions = 0;
  int64_t deletions = 0;
  int64_t reference_length = 0;
  double cer = 0.0;  // 100 * (S+I+D) / reference_length
  int32_t missing_hypotheses = 0;
  std::vector<UtteranceScore> per_utterance;
};

/// Micro-averaged error rate over (utt_id, text) pairs. A reference with
/// no hypothesis counts as a full deletion (missing_hypotheses tallies
/// them so callers can warn). An empty corpus-wide reference scores
/// against a denominator of 1.
ScoreReport ScoreCorpus(
    const std::vector<std::pair<std::string, std::string>> &refs,
    const std::vector<std::pair<std::string, std::string>> &hyps,
    ScoreUnit unit);

struct RunRecord {
  std::string utt_id;
  double wall_ms = 0.0;
  int64_t frames_decoded = 0;
  int64_t total_frames = 0;
};

struct StrategyRun {
  std::string name;
  std::vector<RunRecord> records;
};

struct BenchEntry {
  std::string name;
  double total_wall_ms = 0.0;
  int64_t frames_decoded = 0;
  int64_t total_frames = 0;
  double speedup = 1.0;          // baseline time / this time
  double frame_reduction = 1.0;  // total frames / frames decoded
};

struct BenchReport {
  std::string baseline;
  std::vector<BenchEntry> entries;
};

// All runs must cover the same utterance set; mismatches are a contract
// error (std::invalid_argument).
BenchReport BenchCompare(const std::vector<StrategyRun> &runs,
                         const std::string &baseline_name);

}  // namespace swd

#endif  // SWD_EVAL_H_
