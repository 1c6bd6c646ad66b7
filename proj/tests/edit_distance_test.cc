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

#include "cojudge/edit_distance.h"

#include <algorithm>
#include <vector>

#include "gtest/gtest.h"

namespace cojudge {
namespace {

// Full-matrix Wagner-Fischer, no prefix trimming.
std::size_t MatrixDistance(std::string const& s, std::string const& t) {
  std::vector<std::vector<std::size_t>> d(s.size() + 1, std::vector<std::size_t>(t.size() + 1));
  for (std::size_t i = 0; i <= s.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= t.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    for (std::size_t j = 1; j <= t.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (s[i - 1] == t[j - 1] ? 0 : 1)});
    }
  }
  return d[s.size()][t.size()];
}

Attempt Turn(int k, std::string code, std::string prompt = "Q") {
  Attempt a;
  a.participant = "u";
  a.problem = "p";
  a.turn = k;
  a.code = std::move(code);
  a.prompt_text = std::move(prompt);
  return a;
}

TEST(LevenshteinTest, Fixtures) {
  EXPECT_EQ(Levenshtein(std::string_view("abc"), std::string_view("abc")), 0u);
  EXPECT_EQ(Levenshtein(std::string_view(""), std::string_view("abc")), 3u);
  EXPECT_EQ(Levenshtein(std::string_view("kitten"), std::string_view("sitting")), 3u);
  EXPECT_EQ(Levenshtein(std::string_view("flaw"), std::string_view("lawn")), 2u);
}

TEST(LevenshteinTest, CountsCodePointsNotBytes) {
  EXPECT_EQ(Levenshtein(std::string_view("caf\xc3\xa9"), std::string_view("cafe")), 1u);
  EXPECT_DOUBLE_EQ(Ned(std::string_view("\xc3\xa9"), std::string_view("e")), 1.0);
}

TEST(LevenshteinTest, MatchesMatrixOnSharedAffixes) {
  std::vector<std::string> words{"", "a", "ab", "abcab", "xabcabx", "abxab", "ababab",
                                 "prefix-middle-suffix", "prefix-MIDDLE-suffix", "fix-suf"};
  for (auto const& s : words) {
    for (auto const& t : words) {
      EXPECT_EQ(Levenshtein(std::string_view(s), std::string_view(t)), MatrixDistance(s, t))
          << s << " / " << t;
    }
  }
}

TEST(NedTest, Fixtures) {
  EXPECT_EQ(Ned(std::string_view(""), std::string_view("")), 0.0);
  EXPECT_DOUBLE_EQ(Ned(std::string_view("ab"), std::string_view("ba")), 1.0);
  EXPECT_NEAR(Ned(std::string_view("kitten"), std::string_view("sitting")), 3.0 / 7.0, 1e-12);
  EXPECT_DOUBLE_EQ(Ned(std::string_view("aaaa"), std::string_view("bbbb")), 1.0);
}

TEST(ChurnTest, ConsecutiveCode) {
  std::vector<Attempt> one{Turn(1, "ab")};
  EXPECT_TRUE(ConsecutiveChurn(one, ChurnField::kCode).empty());

  std::vector<Attempt> traj{Turn(1, "ab"), Turn(2, "ba"), Turn(3, "ba")};
  auto churn = ConsecutiveChurn(traj, ChurnField::kCode);
  ASSERT_EQ(churn.size(), 2u);
  EXPECT_EQ(churn[0], (TurnValue{2, 1.0}));
  EXPECT_EQ(churn[1], (TurnValue{3, 0.0}));

  auto prompt = ConsecutiveChurn(traj, ChurnField::kPrompt);
  ASSERT_EQ(prompt.size(), 2u);
  EXPECT_EQ(prompt[0].value, 0.0);
}

}  // namespace
}  // namespace cojudge
