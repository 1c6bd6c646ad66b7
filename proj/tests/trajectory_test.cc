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

#include "cojudge/trajectory.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

namespace cojudge {
namespace {

TrajectoryOutcome Outcome(int horizon, std::optional<int> success, std::string id = "p") {
  FirstSuccess fs = Never{};
  if (success) fs = *success;
  return MakeOutcome("u", std::move(id), fs, horizon);
}

// (T, delta) pair: event at T, or censored at T.
TrajectoryOutcome Observed(int t, bool event) {
  return event ? Outcome(t, t) : Outcome(t, std::nullopt);
}

double SurvivalAt(std::vector<SurvivalPoint> const& km, int t) {
  double s = 1.0;
  for (auto const& pt : km) {
    if (pt.time <= t) s = pt.survival;
  }
  return s;
}

TEST(OutcomeTest, EventAndObservedTime) {
  auto solved = Outcome(5, 2);
  EXPECT_TRUE(solved.event());
  EXPECT_EQ(solved.observed_time(), 2);
  auto never = Outcome(4, std::nullopt);
  EXPECT_FALSE(never.event());
  EXPECT_EQ(never.observed_time(), 4);
}

TEST(OutcomeTest, FromAttempts) {
  std::vector<Attempt> table(3);
  table[0].participant = table[1].participant = table[2].participant = "u";
  table[0].problem = table[1].problem = "a";
  table[2].problem = "b";
  table[0].turn = 1;
  table[1].turn = 2;
  table[1].label = 1;
  table[2].turn = 1;
  auto out = OutcomesFromAttempts(table);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(std::get<int>(out[0].first_success), 2);
  EXPECT_TRUE(std::holds_alternative<Never>(out[1].first_success));
  EXPECT_EQ(out[1].horizon, 1);
}

TEST(SuccessAtTurnTest, Fixtures) {
  std::vector<TrajectoryOutcome> o{Outcome(3, 1, "a"), Outcome(3, 1, "b"), Outcome(3, 2, "c"),
                                   Outcome(3, std::nullopt, "d")};
  auto s = SuccessAtTurn(o, 3);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_DOUBLE_EQ(s[0].value, 0.5);
  EXPECT_DOUBLE_EQ(s[1].value, 0.75);
  EXPECT_DOUBLE_EQ(s[2].value, 0.75);

  std::vector<TrajectoryOutcome> all{Outcome(2, 1, "a"), Outcome(1, 1, "b")};
  for (auto const& pt : SuccessAtTurn(all, 4)) EXPECT_EQ(pt.value, 1.0);
  std::vector<TrajectoryOutcome> none{Outcome(2, std::nullopt, "a")};
  for (auto const& pt : SuccessAtTurn(none, 4)) EXPECT_EQ(pt.value, 0.0);
}

TEST(KaplanMeierTest, HandFixture) {
  std::vector<TrajectoryOutcome> o{Observed(1, true), Observed(2, false), Observed(3, true),
                                   Observed(3, false)};
  auto km = KaplanMeier(o);
  EXPECT_NEAR(SurvivalAt(km, 1), 0.75, 1e-12);
  EXPECT_NEAR(SurvivalAt(km, 3), 0.375, 1e-12);
  EXPECT_EQ(km.back().exact, Rational(3, 8));
  EXPECT_EQ(km.back().at_risk, 2);
  EXPECT_EQ(km.back().events, 1);
  EXPECT_EQ(km.back().censored, 1);
}

TEST(KaplanMeierTest, DegenerateSets) {
  std::vector<TrajectoryOutcome> all_events(4, Observed(1, true));
  EXPECT_EQ(SurvivalAt(KaplanMeier(all_events), 1), 0.0);
  std::vector<TrajectoryOutcome> censored{Observed(1, false), Observed(4, false)};
  for (auto const& pt : KaplanMeier(censored)) EXPECT_EQ(pt.survival, 1.0);
}

TEST(KaplanMeierTest, UncensoredMatchesSuccessAtTurn) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<TrajectoryOutcome> o;
    for (int i = 0; i < 25; ++i) {
      int const t = 1 + static_cast<int>(rng() % 6);
      o.push_back(Outcome(t, t, "p" + std::to_string(i)));
    }
    auto km = KaplanMeier(o);
    auto s = SuccessAtTurn(o, 6);
    for (auto const& pt : km) EXPECT_EQ(Rational(1) - pt.exact, s[pt.time - 1].exact);
  }
}

TEST(SolvedRateTest, Fixtures) {
  std::vector<Attempt> table(5);
  for (auto& a : table) a.participant = "u";
  table[0].problem = "a";
  table[0].label = 1;
  table[1].problem = "b";
  table[2].problem = "c";
  table[3].problem = "d";
  table[3].label = 1;
  table[4].participant = "v";
  table[4].problem = "a";
  auto r = SolvedRate(table);
  EXPECT_DOUBLE_EQ(r["u"], 0.5);
  EXPECT_DOUBLE_EQ(r["v"], 0.0);
}

TEST(MeanConfidenceTest, AverageAndDeltas) {
  PredictionTable t;
  t.judges = {"a", "b"};
  for (int k = 1; k <= 3; ++k) {
    WideRow w;
    w.participant = "u";
    w.problem = "p";
    w.turn = k;
    double const base = k == 1 ? 0.2 : k == 2 ? 0.5 : 0.4;
    w.scores = {{base - 0.1, 1, 1}, {base + 0.1, 1, 1}};
    t.wide_rows.push_back(w);
  }
  auto pts = MeanConfidence(t);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_NEAR(pts[0].p_bar, 0.2, 1e-12);
  EXPECT_FALSE(pts[0].delta_p_bar.has_value());
  EXPECT_NEAR(*pts[1].delta_p_bar, 0.3, 1e-12);
  EXPECT_NEAR(*pts[2].delta_p_bar, -0.1, 1e-12);
}

TEST(TfidfTest, SingleAndIdenticalDocuments) {
  auto one = TfidfEmbed({{"u", "a a b"}});
  ASSERT_TRUE(one.ok());
  auto const& v = one->vectors.at("u");
  EXPECT_NEAR(v[0], 2.0 / std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(v[1], 1.0 / std::sqrt(5.0), 1e-12);

  auto two = TfidfEmbed({{"u", "x y"}, {"v", "x y"}, {"w", "z"}});
  ASSERT_TRUE(two.ok());
  EXPECT_EQ(two->vectors.at("u"), two->vectors.at("v"));
  EXPECT_EQ(two->vectors.at("w")[0], 0.0);
  EXPECT_FALSE(TfidfEmbed({{"u", "   "}}).ok());
}

TEST(TsneTest, ShapeDeterminismAndFallback) {
  std::map<std::string, std::vector<double>> vecs;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0, 1);
  for (int i = 0; i < 15; ++i) {
    std::vector<double> v(8);
    for (auto& x : v) x = n(rng);
    vecs["u" + std::to_string(i)] = v;
  }
  auto a = TsneProject(vecs, 7);
  auto b = TsneProject(vecs, 7);
  EXPECT_FALSE(a.fallback);
  ASSERT_EQ(a.coords.size(), 15u);
  for (auto const& [k, z] : a.coords) {
    EXPECT_TRUE(std::isfinite(z[0]) && std::isfinite(z[1]));
    EXPECT_EQ(z, b.coords.at(k));
  }
  std::map<std::string, std::vector<double>> few{
      {"a", {1, 0, 0}}, {"b", {0, 1, 0}}, {"c", {0, 0, 1}}};
  auto f = TsneProject(few, 7);
  EXPECT_TRUE(f.fallback);
  EXPECT_EQ(f.coords.size(), 3u);
}

TEST(NedSummaryTest, Values) {
  std::vector<double> v{0.2, 0.4};
  auto s = SummarizeNed(v);
  EXPECT_EQ(s.n, 2u);
  EXPECT_NEAR(s.mean, 0.3, 1e-12);
  EXPECT_NEAR(s.std, std::sqrt(0.02), 1e-12);
  ASSERT_EQ(s.histogram.size(), 10u);
}

TEST(PromptCodeNedTest, EqualAndDisjoint) {
  std::vector<Attempt> table(2);
  table[0].participant = table[1].participant = "u";
  table[0].problem = "a";
  table[1].problem = "b";
  table[0].code = table[0].prompt_text = "same";
  table[1].code = "abcd";
  table[1].prompt_text = "wxyz";
  std::map<GroupKey, Split> splits{{GroupKey{"u", "a"}, Split::kTest},
                                   {GroupKey{"u", "b"}, Split::kVal}};
  auto test = PromptCodeNed(table, splits, Split::kTest);
  EXPECT_EQ(test.n, 1u);
  EXPECT_EQ(test.mean, 0.0);
  auto val = PromptCodeNed(table, splits, Split::kVal);
  EXPECT_EQ(val.mean, 1.0);
}

}  // namespace
}  // namespace cojudge
