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

#ifndef COJUDGE_PIPELINE_H_
#define COJUDGE_PIPELINE_H_

#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cojudge/config.h"
#include "cojudge/orchestrator.h"
#include "cojudge/report.h"

namespace cojudge {

inline constexpr std::string_view kToolVersion = "cojudge 0.3.0";

enum class Stage { kIngest, kSplit, kSerialize, kJudge, kVerify, kMerge, kEval, kTrajectory, kReport };

std::string_view StageName(Stage s);
absl::StatusOr<Stage> StageFromName(std::string_view name);
std::vector<Stage> AllStages();

// Work-directory layout.
namespace artifact {
inline constexpr std::string_view kSplits = "splits.csv";
inline constexpr std::string_view kSplitReport = "split_report.json";
inline constexpr std::string_view kRequests = "requests.jsonl";
inline constexpr std::string_view kCheckpoints = "checkpoints";
inline constexpr std::string_view kVerification = "verification.json";
inline constexpr std::string_view kPredictionsLong = "predictions_long.csv";
inline constexpr std::string_view kPredictionsWide = "predictions_wide.csv";
inline constexpr std::string_view kMergeReport = "merge_report.json";
inline constexpr std::string_view kJudgeMetrics = "judge_metrics.json";
inline constexpr std::string_view kAgreement = "agreement.json";
inline constexpr std::string_view kReport = "report.json";
inline constexpr std::string_view kPlots = "plots";
}  // namespace artifact

struct PipelineOptions {
  SleepFn sleep = RealSleep;
  ClockFn clock = UtcNow;
  // Per-judge flush hook; returning false interrupts that judge.
  std::function<bool(std::string const& judge, int flush)> on_flush;
  std::ostream* log = nullptr;
};

struct JudgeVerdict {
  std::string judge;
  bool accepted = false;
  std::string reason;  // set when not accepted
  VerificationReport report;
};

struct PipelineOutcome {
  std::optional<Stage> failed_stage;
  absl::Status cause;
  bool interrupted = false;
  std::vector<std::string> absent_judges;

  // 0 success, 2 verification rejected, 3 stage failure.
  int ExitCode() const;
};

class Pipeline {
 public:
  Pipeline(PipelineConfig config, PipelineOptions options = {});

  // Runs one stage from the artifacts on disk. A failure is reported as
  // "StageFailure(<stage>): <cause>"; earlier artifacts are untouched.
  absl::Status RunStage(Stage stage);

  PipelineOutcome Run(std::vector<Stage> const& stages = AllStages());

  // Verification outcome per configured judge, as last recorded.
  absl::StatusOr<std::vector<JudgeVerdict>> LoadVerification() const;

  absl::StatusOr<EvaluationReport> BuildReport() const;

  PipelineConfig const& config() const { return config_; }
  std::filesystem::path Path(std::string_view name) const;

 private:
  absl::Status Ingest();
  absl::Status SplitStage();
  absl::Status Serialize();
  absl::Status Judge();
  absl::Status Verify();
  absl::Status Merge();
  absl::Status Eval();
  absl::Status Trajectory();
  absl::Status Report();

  void Log(std::string_view line) const;

  PipelineConfig config_;
  PipelineOptions options_;
  bool interrupted_ = false;
};

}  // namespace cojudge

#endif  // COJUDGE_PIPELINE_H_
