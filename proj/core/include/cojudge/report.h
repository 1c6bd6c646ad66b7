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

#ifndef COJUDGE_REPORT_H_
#define COJUDGE_REPORT_H_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "cojudge/codebleu.h"
#include "cojudge/config.h"
#include "cojudge/ingest.h"
#include "cojudge/metrics.h"
#include "cojudge/orchestrator.h"
#include "cojudge/trajectory.h"

namespace cojudge {

inline constexpr std::string_view kReportSchema = "cojudge.report/1";

struct JudgeCurves {
  std::vector<CurvePoint> roc;
  std::vector<CurvePoint> pr;
  std::vector<CalibrationBin> reliability;
};

struct EvaluationBlock {
  std::vector<std::string> judges;             // verified, table order
  std::map<std::string, std::string> absent;   // judge -> reason
  std::vector<JudgeMetrics> metrics;           // verified judges
  std::map<std::string, JudgeCurves> curves;   // TEST split
  std::optional<AgreementReport> agreement;
  std::string agreement_absent_reason;
};

// VAL -> TEST metrics per verified judge plus agreement at each judge's t*.
EvaluationBlock ComputeEvaluation(PredictionTable const& table,
                                  std::map<std::string, std::string> const& absent,
                                  int ece_bins);

struct ChurnRow {
  std::string participant;
  std::string problem;
  int turn = 0;
  double ned_prompt = 0;
  double ned_code = 0;
  double cb_churn = 0;
  std::optional<double> delta_p_bar;
  bool degraded = false;
};

struct TrajectoryBlock {
  std::vector<TrajectoryPoint> points;
  std::vector<TrajectoryOutcome> outcomes;
  std::vector<SuccessPoint> success;
  std::vector<SurvivalPoint> survival;
  std::map<std::string, double> solved_rate;
  std::optional<Projection> prompt_map;
  std::string prompt_map_absent_reason;
  NedSummary ned_test;
  std::vector<ChurnRow> churn;
  std::vector<ConvergenceRecord> convergence;
};

TrajectoryBlock ComputeTrajectory(std::span<Attempt const> attempts,
                                  std::map<std::string, ParticipantContext> const& contexts,
                                  PredictionTable const& table,
                                  std::map<GroupKey, Split> const& splits,
                                  PipelineConfig const& config);

struct Provenance {
  std::string tool_version;
  std::string config_sha256;
  std::string data_sha256;
  std::map<std::string, std::string> artifacts;  // name -> sha256
  std::string data_first_timestamp;
  std::string data_last_timestamp;
  std::vector<std::string> degraded_flags;
};

struct EvaluationReport {
  EvaluationBlock evaluation;
  TrajectoryBlock trajectory;
  CodeBleuConfig codebleu;
  Provenance provenance;
};

// Deterministic JSON; every metric is either a number or null with its
// reason under "absent".
std::string ReportToJson(EvaluationReport const& report);
std::string JudgeMetricsJson(EvaluationBlock const& eval);
std::string AgreementJson(EvaluationBlock const& eval);
std::string NedSummaryJson(NedSummary const& ned);

// Trajectory artifacts: file name -> contents.
std::map<std::string, std::string> TrajectoryArtifacts(TrajectoryBlock const& block);

// Plot-ready CSVs (file name -> contents), one header row each:
//   roc_points.csv          judge,fpr,tpr,threshold
//   pr_points.csv           judge,recall,precision,threshold
//   reliability_bins.csv    judge,bin,lower,upper,count,mean_confidence,accuracy
//   kappa_matrix.csv        judge_a,judge_b,kappa
//   struggle_curves.csv     participant,problem,turn,p_bar
//   survival_curve.csv      time,at_risk,events,censored,survival
//   success_at_turn.csv     turn,success
//   churn_scatter.csv       participant,problem,turn,ned_code,cb_churn,delta_p_bar
//   convergence_hist.csv    lower,upper,count
std::map<std::string, std::string> PlotData(EvaluationReport const& report);
absl::Status EmitPlotData(EvaluationReport const& report, std::filesystem::path const& dir);

}  // namespace cojudge

#endif  // COJUDGE_REPORT_H_
