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

#include "cojudge/split.h"

#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace cojudge {
namespace {

std::vector<LabeledGroup> Groups(int n, int positives) {
  std::vector<LabeledGroup> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({GroupKey{"u" + std::to_string(i % 7), "p" + std::to_string(i)},
                   i < positives ? 1 : 0});
  }
  return out;
}

std::array<std::size_t, 3> Count(GroupSplitResult const& r) {
  std::array<std::size_t, 3> c{};
  for (auto const& a : r.assignments) ++c[static_cast<int>(a.split)];
  return c;
}

Attempt MakeAttempt(std::string u, std::string p, int k, std::string code) {
  Attempt a;
  a.participant = std::move(u);
  a.problem = std::move(p);
  a.turn = k;
  a.attempt_id = a.participant + ":" + a.problem + ":" + std::to_string(k);
  a.code = std::move(code);
  a.prompt_text = "prompt";
  a.language = "C";
  a.verdict = "WA";
  return a;
}

TEST(SplitSizesTest, RoundingRule) {
  EXPECT_EQ(SplitSizes(10, {0.8, 0.1, 0.1}), (std::array<std::size_t, 3>{8, 1, 1}));
  EXPECT_EQ(SplitSizes(184, {0.8, 0.1, 0.1}), (std::array<std::size_t, 3>{148, 18, 18}));
  EXPECT_EQ(SplitSizes(4, {0.8, 0.1, 0.1}), (std::array<std::size_t, 3>{4, 0, 0}));
  EXPECT_EQ(SplitSizes(15, {0.8, 0.1, 0.1}), (std::array<std::size_t, 3>{11, 2, 2}));
}

TEST(GroupSplitTest, TenGroups) {
  SplitConfig cfg;
  cfg.seed = 5;
  auto r = GroupSplit(Groups(10, 5), cfg);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(Count(*r), (std::array<std::size_t, 3>{8, 1, 1}));
}

TEST(GroupSplitTest, AllTrain) {
  SplitConfig cfg;
  cfg.ratios = {1, 0, 0};
  auto r = GroupSplit(Groups(9, 3), cfg);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(Count(*r), (std::array<std::size_t, 3>{9, 0, 0}));
}

TEST(GroupSplitTest, DeterministicPerSeed) {
  SplitConfig cfg;
  cfg.seed = 99;
  auto a = GroupSplit(Groups(50, 20), cfg);
  auto b = GroupSplit(Groups(50, 20), cfg);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(AssignmentsToCsv(a->assignments), AssignmentsToCsv(b->assignments));
}

TEST(GroupSplitTest, SmallStratumGoesToTrain) {
  SplitConfig cfg;
  auto r = GroupSplit(Groups(20, 2), cfg);
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r->warnings.size(), 1u);
  EXPECT_NE(r->warnings[0].find("InsufficientGroups"), std::string::npos);
  for (auto const& a : r->assignments) {
    if (a.group.problem == "p0" || a.group.problem == "p1") EXPECT_EQ(a.split, Split::kTrain);
  }
  EXPECT_EQ(Count(*r), (std::array<std::size_t, 3>{16, 2, 2}));
}

TEST(GroupSplitTest, StratifiedQuotasFollowLabels) {
  SplitConfig cfg;
  cfg.seed = 1;
  auto r = GroupSplit(Groups(100, 50), cfg);
  ASSERT_TRUE(r.ok());
  std::array<int, 2> val_by_label{};
  for (auto const& a : r->assignments) {
    int const idx = std::stoi(a.group.problem.substr(1));
    if (a.split == Split::kVal) ++val_by_label[idx < 50 ? 1 : 0];
  }
  EXPECT_EQ(val_by_label[0], 5);
  EXPECT_EQ(val_by_label[1], 5);
}

TEST(GroupSplitTest, RejectsBadInput) {
  SplitConfig cfg;
  EXPECT_FALSE(GroupSplit({}, cfg).ok());
  auto dup = Groups(3, 1);
  dup.push_back(dup[0]);
  EXPECT_FALSE(GroupSplit(dup, cfg).ok());
  cfg.ratios = {0.5, 0.1, 0.1};
  EXPECT_FALSE(GroupSplit(Groups(3, 1), cfg).ok());
}

TEST(GroupsFromAttemptsTest, LabelIsSolved) {
  auto a = MakeAttempt("u", "p", 1, "x");
  auto b = MakeAttempt("u", "p", 2, "y");
  b.label = 1;
  auto c = MakeAttempt("v", "p", 1, "z");
  std::vector<Attempt> table{a, b, c};
  auto g = GroupsFromAttempts(table);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].label, 1);
  EXPECT_EQ(g[1].label, 0);
}

TEST(SerializeTest, TruncatesAndExcludesLabels) {
  std::vector<Attempt> table{MakeAttempt("u", "p", 1, std::string(20000, 'x')),
                             MakeAttempt("u", "q", 1, "0123456789")};
  table[0].verdict = "AC";
  table[0].label = 1;
  std::vector<SplitAssignment> assign{{GroupKey{"u", "p"}, Split::kVal},
                                      {GroupKey{"u", "q"}, Split::kTest}};
  auto req = SerializeRequests(table, assign);
  ASSERT_TRUE(req.ok());
  EXPECT_EQ((*req)[0].source_code.size(), 12000u);
  EXPECT_EQ((*req)[1].source_code, "0123456789");
  EXPECT_EQ((*req)[0].split, Split::kVal);
  for (auto const& r : *req) {
    auto line = RequestToJsonLine(r);
    EXPECT_EQ(line.find("verdict"), std::string::npos);
    EXPECT_EQ(line.find("label"), std::string::npos);
  }
  auto parsed = ParseRequestsJsonl(RequestsToJsonl(*req));
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(*parsed, *req);

  std::vector<SplitAssignment> partial{assign[0]};
  auto missing = SerializeRequests(table, partial);
  EXPECT_EQ(missing.status().code(), absl::StatusCode::kNotFound);
}

TEST(SerializeTest, TruncationKeepsWholeCodePoints) {
  auto a = MakeAttempt("u", "p", 1, "\xc3\xa9\xc3\xa9\xc3\xa9");
  std::vector<Attempt> table{a};
  std::vector<SplitAssignment> assign{{GroupKey{"u", "p"}, Split::kTrain}};
  auto req = SerializeRequests(table, assign, 2, 2);
  ASSERT_TRUE(req.ok());
  EXPECT_EQ((*req)[0].source_code, "\xc3\xa9\xc3\xa9");
}

TEST(AssignmentsCsvTest, RoundTrip) {
  std::vector<SplitAssignment> assign{{GroupKey{"u,1", "p"}, Split::kVal},
                                      {GroupKey{"u2", "q"}, Split::kTrain}};
  auto parsed = ParseAssignmentsCsv(AssignmentsToCsv(assign));
  ASSERT_TRUE(parsed.ok());
  ASSERT_EQ(parsed->size(), 2u);
  EXPECT_EQ((*parsed)[0].group.participant, "u,1");
  EXPECT_EQ((*parsed)[0].split, Split::kVal);
}

}  // namespace
}  // namespace cojudge
