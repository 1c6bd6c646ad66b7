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

#ifndef COJUDGE_METRICS_H_
#define COJUDGE_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cojudge/orchestrator.h"

namespace cojudge {

inline constexpr int kEceBins = 15;
inline constexpr double kLogLossEpsilon = 1e-15;
// MCC gains at or below this are ties, so t* stays at the smaller threshold.
inline constexpr double kMccTieTolerance = 1e-12;

// Predicted acceptance probabilities paired with 0/1 labels.
class ScoredSet {
 public:
  // Requires equal, non-zero lengths, p in [0,1] and y in {0,1}.
  static absl::StatusOr<ScoredSet> Create(std::vector<double> p, std::vector<int> y);

  std::span<double const> p() const { return p_; }
  std::span<int const> y() const { return y_; }
  std::size_t size() const { return p_.size(); }
  std::size_t positives() const;

 private:
  ScoredSet(std::vector<double> p, std::vector<int> y)
      : p_(std::move(p)), y_(std::move(y)) {}

  std::vector<double> p_;
  std::vector<int> y_;
};

struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + tn + fp + fn; }
  friend bool operator==(ConfusionMatrix const&, ConfusionMatrix const&) = default;
};

struct CalibrationBin {
  int index = 0;  // 1-based
  double lower = 0;
  double upper = 0;
  std::int64_t count = 0;
  double mean_confidence = 0;
  double accuracy = 0;
};

// Mann-Whitney probability that a positive outscores a negative, ties
// counted 1/2. Absent when only one class is present.
std::optional<double> RocAuc(ScoredSet const& s);

// Step-wise average precision over distinct descending thresholds; absent
// without positives.
std::optional<double> PrAuc(ScoredSet const& s);

struct CurvePoint {
  double x = 0;
  double y = 0;
  double threshold = 0;
};

// (FPR, TPR) at every distinct threshold, from (0,0) to (1,1).
std::vector<CurvePoint> RocCurve(ScoredSet const& s);
// (recall, precision) at every distinct threshold, descending.
std::vector<CurvePoint> PrCurve(ScoredSet const& s);

double LogLoss(ScoredSet const& s, double eps = kLogLossEpsilon);
double Brier(ScoredSet const& s);

// Equal-width bins ((b-1)/B, b/B], with p = 0 in bin 1.
int CalibrationBinIndex(double p, int bins);
std::vector<CalibrationBin> ReliabilityBins(ScoredSet const& s, int bins = kEceBins);
double Ece(ScoredSet const& s, int bins = kEceBins);

// Decision rule: predicted positive iff p >= t.
ConfusionMatrix ConfusionAt(ScoredSet const& s, double t);

// 0 when any marginal is empty.
double Mcc(ConfusionMatrix const& c);

struct ThresholdResult {
  double t_star = 0.5;
  double mcc_val = 0;
  double mcc_test = 0;
  bool degenerate_val = false;  // val had a single class; t* = 0.5
};

// t* = the smallest candidate in {0} u {distinct val p} maximizing val MCC;
// the test split is scored at t* without re-selection.
absl::StatusOr<ThresholdResult> SelectThreshold(ScoredSet const& val,
                                                ScoredSet const& test);

// (p_o - p_e) / (1 - p_e). With p_e = 1 the value is 1 when the raters agree
// everywhere and 0 otherwise.
absl::StatusOr<double> CohenKappa(std::span<int const> a, std::span<int const> b);

// items x raters matrix of binary decisions.
absl::StatusOr<double> FleissKappa(std::vector<std::vector<int>> const& ratings);

struct PairwiseKappa {
  std::string a;
  std::string b;
  double kappa = 0;
  bool degenerate = false;  // chance agreement was 1
};

struct AgreementReport {
  std::vector<std::string> judges;
  std::vector<std::vector<double>> matrix;  // diagonal 1
  std::vector<PairwiseKappa> pairwise;
  double fleiss = 0;
  double mean_pairwise = 0;
  double max_pairwise = 0;
  double min_pairwise = 0;
  std::size_t items = 0;
  std::vector<std::string> flags;
};

// Thresholds every judge's p_ac at its own t* over `rows` (typically the
// TEST split) and reports Cohen's kappa per pair plus Fleiss' kappa.
// Fails with NotFound "MissingThreshold(<judge>)".
absl::StatusOr<AgreementReport> ComputeAgreement(
    std::vector<std::string> const& judges, std::span<WideRow const> rows,
    std::vector<std::string> const& table_judges,
    std::map<std::string, double> const& thresholds);

struct JudgeMetrics {
  std::string judge;
  std::optional<double> roc_auc;
  std::optional<double> pr_auc;
  std::optional<double> log_loss;
  std::optional<double> brier;
  std::optional<double> ece;
  std::optional<ThresholdResult> threshold;
  std::size_t n_val = 0;
  std::size_t n_test = 0;
  std::map<std::string, std::string> absent_reasons;
};

// VAL -> TEST evaluation of one judge column of the wide table.
JudgeMetrics EvaluateJudge(PredictionTable const& table, std::size_t judge_index,
                           int ece_bins = kEceBins);

}  // namespace cojudge

#endif  // COJUDGE_METRICS_H_
