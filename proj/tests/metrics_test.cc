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

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"

namespace cojudge {
namespace {

ScoredSet Make(std::vector<double> p, std::vector<int> y) {
  auto s = ScoredSet::Create(std::move(p), std::move(y));
  EXPECT_TRUE(s.ok()) << s.status();
  return *std::move(s);
}

double PairwiseAuc(ScoredSet const& s) {
  double wins = 0;
  double pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.y()[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s.y()[j] != 0) continue;
      pairs += 1;
      if (s.p()[i] > s.p()[j]) wins += 1;
      if (s.p()[i] == s.p()[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

// Mean over positives of precision at that positive's score threshold.
double PositivePrecisionAp(ScoredSet const& s) {
  double sum = 0;
  int positives = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.y()[i] != 1) continue;
    ++positives;
    int above = 0;
    int hits = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s.p()[j] >= s.p()[i]) {
        ++above;
        hits += s.y()[j];
      }
    }
    sum += static_cast<double>(hits) / above;
  }
  return sum / positives;
}

TEST(ScoredSetTest, RejectsBadInput) {
  EXPECT_FALSE(ScoredSet::Create({}, {}).ok());
  EXPECT_FALSE(ScoredSet::Create({0.1}, {1, 0}).ok());
  EXPECT_FALSE(ScoredSet::Create({1.2}, {1}).ok());
  EXPECT_FALSE(ScoredSet::Create({0.2}, {2}).ok());
  EXPECT_FALSE(ScoredSet::Create({std::nan("")}, {1}).ok());
}

TEST(RocAucTest, Fixtures) {
  EXPECT_DOUBLE_EQ(*RocAuc(Make({0.9, 0.8, 0.1, 0.2}, {1, 1, 0, 0})), 1.0);
  EXPECT_NEAR(*RocAuc(Make({0.9, 0.8, 0.7, 0.1}, {1, 0, 1, 0})), 0.75, 1e-12);
  EXPECT_DOUBLE_EQ(*RocAuc(Make({0.5, 0.5, 0.5}, {1, 0, 1})), 0.5);
  EXPECT_FALSE(RocAuc(Make({0.2, 0.3}, {1, 1})).has_value());
}

TEST(RocAucTest, MatchesPairwiseOracleWithTies) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> p(30);
    std::vector<int> y(30);
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = static_cast<double>(rng() % 7) / 6.0;
      y[i] = static_cast<int>(rng() % 2);
    }
    y[0] = 1;
    y[1] = 0;
    auto s = Make(p, y);
    EXPECT_NEAR(*RocAuc(s), PairwiseAuc(s), 1e-12);
  }
}

TEST(PrAucTest, Fixtures) {
  EXPECT_NEAR(*PrAuc(Make({0.9, 0.8, 0.7, 0.1}, {1, 0, 1, 0})), 5.0 / 6.0, 1e-12);
  EXPECT_DOUBLE_EQ(*PrAuc(Make({0.9, 0.8, 0.1}, {1, 1, 0})), 1.0);
  EXPECT_DOUBLE_EQ(*PrAuc(Make({0.4}, {1})), 1.0);
  EXPECT_FALSE(PrAuc(Make({0.4, 0.1}, {0, 0})).has_value());
}

TEST(PrAucTest, MatchesPositivePrecisionOracle) {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> p(25);
    std::vector<int> y(25);
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = static_cast<double>(rng() % 5) / 4.0;
      y[i] = static_cast<int>(rng() % 2);
    }
    y[3] = 1;
    auto s = Make(p, y);
    EXPECT_NEAR(*PrAuc(s), PositivePrecisionAp(s), 1e-12);
  }
}

TEST(CurveTest, PerfectJudgeRocPassesThroughTopLeft) {
  auto roc = RocCurve(Make({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}));
  ASSERT_FALSE(roc.empty());
  EXPECT_EQ(roc.front().x, 0.0);
  EXPECT_EQ(roc.front().y, 0.0);
  EXPECT_EQ(roc.back().x, 1.0);
  EXPECT_EQ(roc.back().y, 1.0);
  bool top_left = false;
  for (auto const& pt : roc) top_left |= pt.x == 0.0 && pt.y == 1.0;
  EXPECT_TRUE(top_left);
  auto pr = PrCurve(Make({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}));
  EXPECT_FALSE(pr.empty());
}

TEST(LogLossTest, Fixtures) {
  EXPECT_NEAR(LogLoss(Make({0.5, 0.5, 0.5}, {1, 0, 1})), std::log(2.0), 1e-12);
  EXPECT_LT(LogLoss(Make({1.0, 0.0}, {1, 0})), 1e-14);
  EXPECT_NEAR(LogLoss(Make({0.8}, {1})), 0.22314355131420976, 1e-12);
}

TEST(BrierTest, Fixtures) {
  EXPECT_EQ(Brier(Make({1.0, 0.0}, {1, 0})), 0.0);
  EXPECT_DOUBLE_EQ(Brier(Make({0.5, 0.5}, {1, 0})), 0.25);
  EXPECT_NEAR(Brier(Make({0.8, 0.3}, {1, 0})), 0.065, 1e-12);
}

TEST(ProperScoreTest, LabelFlipSymmetry) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(40), q(40);
  std::vector<int> y(40), z(40);
  for (int i = 0; i < 40; ++i) {
    p[i] = u(rng);
    y[i] = u(rng) < 0.5;
    q[i] = 1.0 - p[i];
    z[i] = 1 - y[i];
  }
  EXPECT_NEAR(Brier(Make(p, y)), Brier(Make(q, z)), 1e-12);
  EXPECT_NEAR(LogLoss(Make(p, y)), LogLoss(Make(q, z)), 1e-12);
}

TEST(CalibrationTest, BinIndexEdges) {
  EXPECT_EQ(CalibrationBinIndex(0.0, 15), 1);
  EXPECT_EQ(CalibrationBinIndex(1.0, 15), 15);
  EXPECT_EQ(CalibrationBinIndex(0.1, 10), 1);
  EXPECT_EQ(CalibrationBinIndex(0.2, 10), 2);
  EXPECT_EQ(CalibrationBinIndex(0.2000001, 10), 3);
}

TEST(CalibrationTest, EceFixtures) {
  EXPECT_EQ(Ece(Make({1.0, 0.0}, {1, 0})), 0.0);
  EXPECT_NEAR(Ece(Make({0.7}, {1})), 0.3, 1e-12);
  EXPECT_NEAR(Ece(Make({0.7, 0.7}, {1, 0})), 0.2, 1e-12);
}

TEST(CalibrationTest, ReliabilityOnDiagonalForExactLabels) {
  auto bins = ReliabilityBins(Make({1.0, 0.0, 1.0}, {1, 0, 1}), 10);
  for (auto const& b : bins) {
    if (b.count > 0) EXPECT_DOUBLE_EQ(b.mean_confidence, b.accuracy);
  }
}

TEST(ConfusionTest, Thresholds) {
  auto s = Make({0.2, 0.9}, {0, 1});
  auto c = ConfusionAt(s, 0.5);
  EXPECT_EQ(c, (ConfusionMatrix{1, 1, 0, 0}));
  EXPECT_EQ(ConfusionAt(s, 0.0).tp + ConfusionAt(s, 0.0).fp, 2);
  EXPECT_EQ(ConfusionAt(s, std::nextafter(0.9, 1.0)).tp, 0);
}

TEST(MccTest, Fixtures) {
  EXPECT_DOUBLE_EQ(Mcc({5, 5, 0, 0}), 1.0);
  EXPECT_EQ(Mcc({1, 1, 1, 1}), 0.0);
  EXPECT_NEAR(Mcc({3, 4, 1, 2}), 10.0 / std::sqrt(600.0), 1e-12);
  EXPECT_EQ(Mcc({4, 0, 0, 0}), 0.0);
}

TEST(SelectThresholdTest, Fixtures) {
  auto val = Make({0.2, 0.6, 0.9}, {0, 1, 1});
  auto r = SelectThreshold(val, val);
  ASSERT_TRUE(r.ok());
  EXPECT_DOUBLE_EQ(r->t_star, 0.6);
  EXPECT_DOUBLE_EQ(r->mcc_val, 1.0);
  EXPECT_EQ(r->mcc_test, r->mcc_val);

  auto inverted = Make({0.9, 0.8, 0.2, 0.1}, {0, 0, 1, 1});
  auto q = SelectThreshold(inverted, inverted);
  ASSERT_TRUE(q.ok());
  EXPECT_EQ(q->t_star, 0.0);
  EXPECT_LE(q->mcc_val, 0.0);
}

TEST(SelectThresholdTest, DegenerateValUsesHalf) {
  auto val = Make({0.3, 0.7}, {1, 1});
  auto test = Make({0.3, 0.7}, {0, 1});
  auto r = SelectThreshold(val, test);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->degenerate_val);
  EXPECT_EQ(r->t_star, 0.5);
  EXPECT_DOUBLE_EQ(r->mcc_test, 1.0);
}

TEST(KappaTest, CohenFixtures) {
  std::vector<int> a{1, 1, 0, 0}, b{1, 0, 0, 0};
  EXPECT_NEAR(*CohenKappa(a, b), 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(*CohenKappa(a, a), 1.0);
  std::vector<int> c{0, 0, 1, 1};
  EXPECT_NEAR(*CohenKappa(a, c), -1.0, 1e-12);
  std::vector<int> ones{1, 1, 1};
  EXPECT_EQ(*CohenKappa(ones, ones), 1.0);
  EXPECT_FALSE(CohenKappa(a, ones).ok());
}

TEST(KappaTest, FleissFixtures) {
  EXPECT_NEAR(*FleissKappa({{1, 1, 0}, {0, 0, 0}}), 0.25, 1e-12);
  EXPECT_DOUBLE_EQ(*FleissKappa({{1, 1}, {0, 0}, {1, 1}}), 1.0);
  EXPECT_FALSE(FleissKappa({{1, 1}, {0}}).ok());
}

TEST(KappaTest, FleissNearZeroForIndependentRaters) {
  std::mt19937_64 rng(2024);
  std::vector<std::vector<int>> r(10000, std::vector<int>(4));
  for (auto& row : r) {
    for (auto& v : row) v = static_cast<int>(rng() & 1);
  }
  EXPECT_LT(std::abs(*FleissKappa(r)), 0.05);
}

TEST(AgreementTest, IdenticalJudgesAgreeFully) {
  std::vector<WideRow> rows;
  for (int i = 0; i < 6; ++i) {
    WideRow w;
    w.attempt_id = "u:p:" + std::to_string(i + 1);
    w.label = i % 2;
    double const p = i % 2 ? 0.8 : 0.3;
    w.scores = {{p, 3, 3}, {p, 3, 3}};
    rows.push_back(w);
  }
  std::vector<std::string> judges{"a", "b"};
  auto rep = ComputeAgreement(judges, rows, judges, {{"a", 0.5}, {"b", 0.5}});
  ASSERT_TRUE(rep.ok()) << rep.status();
  EXPECT_DOUBLE_EQ(rep->fleiss, 1.0);
  EXPECT_DOUBLE_EQ(rep->pairwise.at(0).kappa, 1.0);
  EXPECT_EQ(rep->matrix[0][0], 1.0);
  EXPECT_EQ(rep->matrix[1][1], 1.0);
  auto missing = ComputeAgreement(judges, rows, judges, {{"a", 0.5}});
  EXPECT_FALSE(missing.ok());
}

}  // namespace
}  // namespace cojudge
