// Copyright 2026 The cojudge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COJUDGE_ORCHESTRATOR_H_
#define COJUDGE_ORCHESTRATOR_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cojudge/ingest.h"
#include "cojudge/judge.h"
#include "cojudge/split.h"

namespace cojudge {

inline constexpr double kSleepSeconds = 0.2;
inline constexpr int kSaveEvery = 10;

// Append-only JSONL checkpoint for one judge (judge_<name>.jsonl). Each line
// holds attempt_id, p_ac, s_algo, s_robust, rationale, error, raw_response
// and received_at; on load the last line for an attempt_id wins, which is
// how retries overwrite earlier failures without rewriting the file.
class CheckpointStore {
 public:
  explicit CheckpointStore(std::filesystem::path path, std::string judge = {});

  static std::filesystem::path PathFor(std::filesystem::path const& dir,
                                       std::string const& judge);

  // Fails with DataLoss "CheckpointCorrupt: ..." on any unparseable line.
  absl::StatusOr<std::map<std::string, JudgeOutput>> Load() const;
  // Load() flattened in attempt_id order.
  absl::StatusOr<std::vector<JudgeOutput>> LoadTable() const;
  absl::Status Append(std::span<JudgeOutput const> records);

  std::filesystem::path const& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::string judge_;
};

std::string JudgeOutputToJsonLine(JudgeOutput const& out);

using SleepFn = std::function<void(std::chrono::duration<double>)>;
using ClockFn = std::function<std::string()>;

// Real sleeping / wall-clock UTC ISO-8601.
void RealSleep(std::chrono::duration<double> d);
std::string UtcNow();

struct InferenceOptions {
  int save_every = kSaveEvery;
  double sleep_seconds = kSleepSeconds;
  SleepFn sleep = RealSleep;
  ClockFn clock = UtcNow;
  // Invoked after every flush with the running flush count. Returning
  // false stops the run at that boundary (used to simulate interruption).
  std::function<bool(int)> on_flush;
};

struct InferenceStats {
  int calls = 0;
  int skipped = 0;
  int flushes = 0;
  bool interrupted = false;
};

// Issues the adapter for every request without an error-free checkpoint
// record, pacing remote adapters and flushing at least every save_every
// results.
absl::StatusOr<InferenceStats> RunInference(JudgeAdapter& adapter,
                                            std::span<JudgeRequest const> requests,
                                            CheckpointStore& store,
                                            InferenceOptions const& options = {});

// Exponential backoff with symmetric multiplicative jitter, capped.
struct BackoffPolicy {
  double base_seconds = 1.0;
  double factor = 2.0;
  double jitter = 0.2;
  double cap_seconds = 60.0;
  std::uint64_t seed = 0;

  // Delay before retry pass `pass` (1-based). `unit` in [0,1) drives the
  // jitter: delay = min(cap, base * factor^(pass-1)) * (1 + jitter*(2u-1)).
  std::chrono::duration<double> Delay(int pass, double unit) const;
};

struct RetryOptions {
  int max_retries = 3;
  BackoffPolicy backoff;
  double sleep_seconds = kSleepSeconds;
  SleepFn sleep = RealSleep;
  ClockFn clock = UtcNow;
};

struct RetryOutcome {
  std::vector<JudgeOutput> table;  // final table in attempt_id order
  std::vector<std::string> exhausted_ids;  // ExhaustedRetries(ids)
  int passes = 0;
  int calls = 0;

  bool exhausted() const { return !exhausted_ids.empty(); }
};

// Re-issues only attempt_ids whose checkpoint record carries an error,
// for at most max_retries passes; successes overwrite the failure.
absl::StatusOr<RetryOutcome> RetryFailed(JudgeAdapter& adapter,
                                         std::span<JudgeRequest const> requests,
                                         CheckpointStore& store,
                                         RetryOptions const& options = {});

// Acceptance conditions for a judge output table.
enum class VerifyCondition { kCount, kUniq, kMissing, kRange, kError };
std::string_view ConditionName(VerifyCondition c);

struct ConditionViolation {
  VerifyCondition condition;
  std::vector<std::string> attempt_ids;
  std::string detail;
};

struct VerificationReport {
  bool accepted = false;
  std::vector<ConditionViolation> violations;

  bool Violates(VerifyCondition c) const;
};

// Accepted iff |O| = |A|, the ids are unique and exactly cover A, no p_ac
// is missing, every p_ac lies in [0,1] and no error slot is set.
VerificationReport VerifyOutputs(std::span<JudgeOutput const> table,
                                 std::span<Attempt const> attempts);

struct JudgeScores {
  double p_ac = 0;
  int s_algo = 0;
  int s_robust = 0;
};

struct LongRow {
  std::string attempt_id;
  std::string participant;
  std::string problem;
  int turn = 0;
  Split split = Split::kTrain;
  int label = 0;
  std::string judge;
  JudgeScores scores;
};

struct WideRow {
  std::string attempt_id;
  std::string participant;
  std::string problem;
  int turn = 0;
  Split split = Split::kTrain;
  int label = 0;
  std::vector<JudgeScores> scores;  // aligned with PredictionTable::judges
};

struct PredictionTable {
  std::vector<std::string> judges;
  std::vector<LongRow> long_rows;
  std::vector<WideRow> wide_rows;
};

// Fails with FailedPrecondition "UnverifiedInput(<judge>)" when any table
// does not pass VerifyOutputs. Rows follow the attempt table order.
absl::StatusOr<PredictionTable> MergePredictions(
    std::map<std::string, std::vector<JudgeOutput>> const& tables,
    std::span<Attempt const> attempts,
    std::map<GroupKey, Split> const& splits);

std::string LongTableCsv(PredictionTable const& table);
std::string WideTableCsv(PredictionTable const& table);
absl::StatusOr<PredictionTable> ParseWideTableCsv(std::string_view text);

struct JudgeRunOptions {
  InferenceOptions inference;
  RetryOptions retry;
};

struct JudgeRunResult {
  std::string judge;
  InferenceStats inference;
  RetryOutcome retry;
  VerificationReport verification;
};

// One judge's branch of the workflow: inference with checkpointing, then
// retry-only-failed passes, then verification against the attempt table.
absl::StatusOr<JudgeRunResult> RunJudge(JudgeAdapter& adapter,
                                        std::span<JudgeRequest const> requests,
                                        std::span<Attempt const> attempts,
                                        CheckpointStore& store,
                                        JudgeRunOptions const& options);

}  // namespace cojudge

#endif  // COJUDGE_ORCHESTRATOR_H_
