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

#include "cojudge/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace cojudge {

absl::StatusOr<ScoredSet> ScoredSet::Create(std::vector<double> p, std::vector<int> y) {
  if (p.size() != y.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("LengthMismatch: ", p.size(), " scores vs ", y.size(), " labels"));
  }
  if (p.empty()) return absl::InvalidArgumentError("empty scored set");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0 && p[i] <= 1.0)) {
      return absl::InvalidArgumentError(absl::StrCat("p[", i, "] = ", p[i], " not in [0,1]"));
    }
    if (y[i] != 0 && y[i] != 1) {
      return absl::InvalidArgumentError(absl::StrCat("y[", i, "] = ", y[i], " not in {0,1}"));
    }
  }
  return ScoredSet(std::move(p), std::move(y));
}

std::size_t ScoredSet::positives() const {
  return static_cast<std::size_t>(std::count(y_.begin(), y_.end(), 1));
}

std::optional<double> RocAuc(ScoredSet const& s) {
  auto const n = s.size();
  auto const pos = s.positives();
  auto const neg = n - pos;
  if (pos == 0 || neg == 0) return std::nullopt;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto const p = s.p();
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return p[a] < p[b]; });
  // Mid-ranks of tied runs; half-integers are exact in double.
  double rank_sum = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && p[order[j + 1]] == p[order[i]]) ++j;
    double const mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (s.y()[order[k]] == 1) rank_sum += mid;
    }
    i = j + 1;
  }
  double const u = rank_sum - static_cast<double>(pos) * static_cast<double>(pos + 1) / 2.0;
  return u / (static_cast<double>(pos) * static_cast<double>(neg));
}

std::optional<double> PrAuc(ScoredSet const& s) {
  auto const total_pos = s.positives();
  if (total_pos == 0) return std::nullopt;
  auto const n = s.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto const p = s.p();
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return p[a] > p[b]; });
  double ap = 0;
  double prev_recall = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && p[order[j]] == p[order[i]]) {
      (s.y()[order[j]] == 1 ? tp : fp) += 1;
      ++j;
    }
    double const recall = static_cast<double>(tp) / static_cast<double>(total_pos);
    double const precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

namespace {

// Confusion counts after admitting each tied score group, scores descending.
template <typename Fn>
void SweepDescending(ScoredSet const& s, Fn&& emit) {
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  auto const p = s.p();
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return p[a] > p[b]; });
  std::size_t tp = 0, fp = 0, i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && p[order[j]] == p[order[i]]) {
      (s.y()[order[j]] == 1 ? tp : fp) += 1;
      ++j;
    }
    emit(p[order[i]], tp, fp);
    i = j;
  }
}

}  // namespace

std::vector<CurvePoint> RocCurve(ScoredSet const& s) {
  auto const pos = static_cast<double>(s.positives());
  auto const neg = static_cast<double>(s.size()) - pos;
  std::vector<CurvePoint> out{{0.0, 0.0, 1.0}};
  SweepDescending(s, [&](double t, std::size_t tp, std::size_t fp) {
    out.push_back({neg > 0 ? fp / neg : 0.0, pos > 0 ? tp / pos : 0.0, t});
  });
  return out;
}

std::vector<CurvePoint> PrCurve(ScoredSet const& s) {
  auto const pos = static_cast<double>(s.positives());
  std::vector<CurvePoint> out;
  SweepDescending(s, [&](double t, std::size_t tp, std::size_t fp) {
    out.push_back({pos > 0 ? tp / pos : 0.0, static_cast<double>(tp) / static_cast<double>(tp + fp), t});
  });
  return out;
}

double LogLoss(ScoredSet const& s, double eps) {
  double sum = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double const p = std::clamp(s.p()[i], eps, 1.0 - eps);
    sum += s.y()[i] == 1 ? std::log(p) : std::log1p(-p);
  }
  return -sum / static_cast<double>(s.size());
}

double Brier(ScoredSet const& s) {
  double sum = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double const d = s.p()[i] - s.y()[i];
    sum += d * d;
  }
  return sum / static_cast<double>(s.size());
}

int CalibrationBinIndex(double p, int bins) {
  auto b = static_cast<int>(std::ceil(p * bins));
  // Correct the product's rounding against the exact edge b/B.
  if (b > 1 && p <= static_cast<double>(b - 1) / bins) --b;
  if (b < bins && p > static_cast<double>(b) / bins) ++b;
  return std::clamp(b, 1, bins);
}

std::vector<CalibrationBin> ReliabilityBins(ScoredSet const& s, int bins) {
  std::vector<CalibrationBin> out(static_cast<std::size_t>(bins));
  std::vector<double> conf_sum(out.size(), 0.0);
  std::vector<double> acc_sum(out.size(), 0.0);
  for (int b = 0; b < bins; ++b) {
    out[b].index = b + 1;
    out[b].lower = static_cast<double>(b) / bins;
    out[b].upper = static_cast<double>(b + 1) / bins;
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto const b = static_cast<std::size_t>(CalibrationBinIndex(s.p()[i], bins) - 1);
    ++out[b].count;
    conf_sum[b] += s.p()[i];
    acc_sum[b] += s.y()[i];
  }
  for (std::size_t b = 0; b < out.size(); ++b) {
    if (out[b].count == 0) continue;
    auto const n = static_cast<double>(out[b].count);
    out[b].mean_confidence = conf_sum[b] / n;
    out[b].accuracy = acc_sum[b] / n;
  }
  return out;
}

double Ece(ScoredSet const& s, int bins) {
  double ece = 0;
  auto const n = static_cast<double>(s.size());
  for (auto const& bin : ReliabilityBins(s, bins)) {
    if (bin.count == 0) continue;
    ece += (static_cast<double>(bin.count) / n) *
           std::abs(bin.accuracy - bin.mean_confidence);
  }
  return ece;
}

ConfusionMatrix ConfusionAt(ScoredSet const& s, double t) {
  ConfusionMatrix c;
  for (std::size_t i = 0; i < s.size(); ++i) {
    bool const predicted = s.p()[i] >= t;
    bool const actual = s.y()[i] == 1;
    if (predicted && actual) {
      ++c.tp;
    } else if (predicted) {
      ++c.fp;
    } else if (actual) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return c;
}

double Mcc(ConfusionMatrix const& c) {
  auto const tp = static_cast<double>(c.tp);
  auto const tn = static_cast<double>(c.tn);
  auto const fp = static_cast<double>(c.fp);
  auto const fn = static_cast<double>(c.fn);
  double const denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom == 0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(denom);
}

absl::StatusOr<ThresholdResult> SelectThreshold(ScoredSet const& val,
                                                ScoredSet const& test) {
  ThresholdResult result;
  auto const pos = val.positives();
  if (pos == 0 || pos == val.size()) {
    result.degenerate_val = true;
    result.t_star = 0.5;
    result.mcc_val = Mcc(ConfusionAt(val, result.t_star));
    result.mcc_test = Mcc(ConfusionAt(test, result.t_star));
    return result;
  }
  std::vector<double> candidates(val.p().begin(), val.p().end());
  candidates.push_back(0.0);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  bool first = true;
  for (double t : candidates) {
    double const m = Mcc(ConfusionAt(val, t));
    if (first || m > result.mcc_val + kMccTieTolerance) {
      result.t_star = t;
      result.mcc_val = m;
      first = false;
    }
  }
  result.mcc_test = Mcc(ConfusionAt(test, result.t_star));
  return result;
}

absl::StatusOr<double> CohenKappa(std::span<int const> a, std::span<int const> b) {
  if (a.size() != b.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("LengthMismatch: ", a.size(), " vs ", b.size()));
  }
  if (a.empty()) return absl::InvalidArgumentError("cohen_kappa needs at least one item");
  auto const n = static_cast<double>(a.size());
  double agree = 0, a1 = 0, b1 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] != 0 && a[i] != 1) || (b[i] != 0 && b[i] != 1)) {
      return absl::InvalidArgumentError("cohen_kappa expects binary labels");
    }
    agree += a[i] == b[i];
    a1 += a[i];
    b1 += b[i];
  }
  double const po = agree / n;
  double const pa = a1 / n;
  double const pb = b1 / n;
  double const pe = pa * pb + (1 - pa) * (1 - pb);
  if (pe == 1.0) return agree == n ? 1.0 : 0.0;
  return (po - pe) / (1 - pe);
}

absl::StatusOr<double> FleissKappa(std::vector<std::vector<int>> const& ratings) {
  if (ratings.empty()) return absl::InvalidArgumentError("IncompleteMatrix: no items");
  std::size_t const raters = ratings.front().size();
  if (raters < 2) return absl::InvalidArgumentError("IncompleteMatrix: need >= 2 raters");
  auto const n = static_cast<double>(raters);
  double p_bar = 0;
  double ones = 0;
  for (auto const& item : ratings) {
    if (item.size() != raters) {
      return absl::InvalidArgumentError("IncompleteMatrix: ragged ratings");
    }
    double n1 = 0;
    for (int r : item) {
      if (r != 0 && r != 1) return absl::InvalidArgumentError("IncompleteMatrix: non-binary rating");
      n1 += r;
    }
    double const n0 = n - n1;
    p_bar += (n1 * (n1 - 1) + n0 * (n0 - 1)) / (n * (n - 1));
    ones += n1;
  }
  auto const items = static_cast<double>(ratings.size());
  p_bar /= items;
  double const p1 = ones / (items * n);
  double const pe = p1 * p1 + (1 - p1) * (1 - p1);
  if (pe == 1.0) return 1.0;  // every rating in one category
  return (p_bar - pe) / (1 - pe);
}

absl::StatusOr<AgreementReport> ComputeAgreement(
    std::vector<std::string> const& judges, std::span<WideRow const> rows,
    std::vector<std::string> const& table_judges,
    std::map<std::string, double> const& thresholds) {
  AgreementReport report;
  report.judges = judges;
  report.items = rows.size();
  std::vector<std::vector<int>> decisions;  // per judge
  for (auto const& j : judges) {
    auto t = thresholds.find(j);
    if (t == thresholds.end()) {
      return absl::NotFoundError(absl::StrCat("MissingThreshold(", j, ")"));
    }
    auto col = std::find(table_judges.begin(), table_judges.end(), j);
    if (col == table_judges.end()) {
      return absl::NotFoundError(absl::StrCat("judge ", j, " not in prediction table"));
    }
    auto const idx = static_cast<std::size_t>(col - table_judges.begin());
    auto& d = decisions.emplace_back();
    for (auto const& r : rows) d.push_back(r.scores[idx].p_ac >= t->second ? 1 : 0);
    if (!d.empty() && std::all_of(d.begin(), d.end(), [&](int v) { return v == d[0]; })) {
      report.flags.push_back(absl::StrCat("constant decisions: ", j));
    }
  }
  if (rows.empty()) {
    report.flags.push_back("no items to compare");
    return report;
  }
  auto const k = judges.size();
  report.matrix.assign(k, std::vector<double>(k, 1.0));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      auto kappa = CohenKappa(decisions[a], decisions[b]);
      if (!kappa.ok()) return kappa.status();
      report.matrix[a][b] = report.matrix[b][a] = *kappa;
      bool const constant_a = std::all_of(decisions[a].begin(), decisions[a].end(),
                                          [&](int v) { return v == decisions[a][0]; });
      bool const constant_b = std::all_of(decisions[b].begin(), decisions[b].end(),
                                          [&](int v) { return v == decisions[b][0]; });
      bool const degenerate = constant_a && constant_b && decisions[a][0] == decisions[b][0];
      report.pairwise.push_back({judges[a], judges[b], *kappa, degenerate});
    }
  }
  if (!report.pairwise.empty()) {
    double sum = 0;
    report.max_pairwise = report.min_pairwise = report.pairwise.front().kappa;
    for (auto const& p : report.pairwise) {
      sum += p.kappa;
      report.max_pairwise = std::max(report.max_pairwise, p.kappa);
      report.min_pairwise = std::min(report.min_pairwise, p.kappa);
    }
    report.mean_pairwise = sum / static_cast<double>(report.pairwise.size());
  }
  if (k >= 2) {
    std::vector<std::vector<int>> matrix(rows.size(), std::vector<int>(k));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < k; ++j) matrix[i][j] = decisions[j][i];
    }
    auto fleiss = FleissKappa(matrix);
    if (!fleiss.ok()) return fleiss.status();
    report.fleiss = *fleiss;
  }
  return report;
}

JudgeMetrics EvaluateJudge(PredictionTable const& table, std::size_t judge_index,
                           int ece_bins) {
  JudgeMetrics m;
  m.judge = table.judges.at(judge_index);
  std::vector<double> vp, tp;
  std::vector<int> vy, ty;
  for (auto const& r : table.wide_rows) {
    if (r.split == Split::kVal) {
      vp.push_back(r.scores[judge_index].p_ac);
      vy.push_back(r.label);
    } else if (r.split == Split::kTest) {
      tp.push_back(r.scores[judge_index].p_ac);
      ty.push_back(r.label);
    }
  }
  m.n_val = vp.size();
  m.n_test = tp.size();
  auto test = ScoredSet::Create(tp, ty);
  if (!test.ok()) {
    for (auto const* key : {"roc_auc", "pr_auc", "log_loss", "brier", "ece15", "t_star"}) {
      m.absent_reasons[key] = "empty test split";
    }
    return m;
  }
  m.roc_auc = RocAuc(*test);
  if (!m.roc_auc) m.absent_reasons["roc_auc"] = "DegenerateLabels: single class on test";
  m.pr_auc = PrAuc(*test);
  if (!m.pr_auc) m.absent_reasons["pr_auc"] = "DegenerateLabels: no positives on test";
  m.log_loss = LogLoss(*test);
  m.brier = Brier(*test);
  m.ece = Ece(*test, ece_bins);
  auto val = ScoredSet::Create(vp, vy);
  if (!val.ok()) {
    m.absent_reasons["t_star"] = "empty val split";
    return m;
  }
  auto threshold = SelectThreshold(*val, *test);
  if (threshold.ok()) m.threshold = *threshold;
  return m;
}

}  // namespace cojudge
