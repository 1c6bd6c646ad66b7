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

#include "cojudge/report.h"

#include "gtest/gtest.h"
#include "nlohmann/json.hpp"

namespace cojudge {
namespace {

// Two judges over 8 test and 8 val attempts. Judge "a" separates the
// classes perfectly; judge "b" is constant.
PredictionTable Table() {
  PredictionTable t;
  t.judges = {"a", "b"};
  for (int i = 0; i < 16; ++i) {
    WideRow w;
    w.attempt_id = "u:p" + std::to_string(i) + ":1";
    w.participant = "u";
    w.problem = "p" + std::to_string(i);
    w.turn = 1;
    w.split = i < 8 ? Split::kVal : Split::kTest;
    w.label = i % 2;
    w.scores = {{w.label ? 0.9 : 0.1, 4, 4}, {0.5, 3, 3}};
    t.wide_rows.push_back(w);
  }
  return t;
}

TEST(EvaluationTest, PerfectJudgeAndAbsentReasons) {
  auto eval = ComputeEvaluation(Table(), {{"c", "verification failed"}}, 15);
  ASSERT_EQ(eval.metrics.size(), 2u);
  EXPECT_DOUBLE_EQ(*eval.metrics[0].roc_auc, 1.0);
  EXPECT_DOUBLE_EQ(eval.metrics[0].threshold->mcc_test, 1.0);
  EXPECT_DOUBLE_EQ(*eval.metrics[1].roc_auc, 0.5);
  EXPECT_EQ(eval.absent.at("c"), "verification failed");

  bool top_left = false;
  for (auto const& pt : eval.curves.at("a").roc) top_left |= pt.x == 0.0 && pt.y == 1.0;
  EXPECT_TRUE(top_left);
  ASSERT_TRUE(eval.agreement.has_value());
  EXPECT_EQ(eval.agreement->matrix[0][0], 1.0);
  EXPECT_EQ(eval.agreement->matrix[1][1], 1.0);
}

TEST(ReportJsonTest, AbsentMetricsAreNullWithReason) {
  EvaluationReport r;
  r.evaluation = ComputeEvaluation(Table(), {}, 15);
  auto j = nlohmann::json::parse(ReportToJson(r));
  EXPECT_EQ(j["schema"], "cojudge.report/1");
  auto const w = j["codebleu"]["weights"];
  ASSERT_EQ(w.size(), 4u);
  EXPECT_DOUBLE_EQ(w[0].get<double>(), 1.0 / 3);
  EXPECT_DOUBLE_EQ(w[3].get<double>(), 0.0);
  EXPECT_EQ(ReportToJson(r), ReportToJson(r));
}

TEST(PlotDataTest, HeadersAndDiagonalKappa) {
  EvaluationReport r;
  r.evaluation = ComputeEvaluation(Table(), {}, 15);
  auto plots = PlotData(r);
  std::map<std::string, std::string> const headers{
      {"roc_points.csv", "judge,fpr,tpr,threshold"},
      {"pr_points.csv", "judge,recall,precision,threshold"},
      {"reliability_bins.csv", "judge,bin,lower,upper,count,mean_confidence,accuracy"},
      {"kappa_matrix.csv", "judge_a,judge_b,kappa"},
      {"struggle_curves.csv", "participant,problem,turn,p_bar"},
      {"survival_curve.csv", "time,at_risk,events,censored,survival"},
      {"success_at_turn.csv", "turn,success"},
      {"churn_scatter.csv", "participant,problem,turn,ned_code,cb_churn,delta_p_bar"},
      {"convergence_hist.csv", "lower,upper,count"}};
  for (auto const& [name, header] : headers) {
    ASSERT_TRUE(plots.count(name)) << name;
    EXPECT_EQ(plots[name].substr(0, plots[name].find('\n')), header) << name;
  }
  EXPECT_NE(plots["kappa_matrix.csv"].find("a,a,1"), std::string::npos);
}

}  // namespace
}  // namespace cojudge
