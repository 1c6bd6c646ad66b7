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

#include "cojudge/judge.h"

#include <set>

#include "gtest/gtest.h"

namespace cojudge {
namespace {

JudgeRequest Request(std::string id) {
  JudgeRequest r;
  r.attempt_id = std::move(id);
  r.problem_id = "A";
  r.language = "C";
  r.source_code = "int main(){}";
  r.prompt_text = "help";
  return r;
}

TEST(ParseJudgeResponseTest, WellFormed) {
  auto o = ParseJudgeResponse(R"({"p_ac":0.7,"s_algo":4,"s_robust":3,"rationale":"ok"})", "a",
                              "j");
  EXPECT_TRUE(o.ok());
  EXPECT_EQ(*o.p_ac, 0.7);
  EXPECT_EQ(*o.s_algo, 4);
  EXPECT_EQ(*o.s_robust, 3);
  EXPECT_EQ(o.rationale, "ok");
}

TEST(ParseJudgeResponseTest, SchemaErrors) {
  auto range = ParseJudgeResponse(R"({"p_ac":1.3,"s_algo":4,"s_robust":3,"rationale":""})",
                                  "a", "j");
  EXPECT_EQ(range.error, "p out of range");
  EXPECT_FALSE(range.p_ac.has_value());
  auto missing = ParseJudgeResponse(R"({"p_ac":0.3,"s_algo":4,"rationale":""})", "a", "j");
  EXPECT_EQ(missing.error, "missing field s_robust");
  auto score = ParseJudgeResponse(R"({"p_ac":0.3,"s_algo":9,"s_robust":1,"rationale":""})",
                                  "a", "j");
  EXPECT_TRUE(score.error.has_value());
  auto junk = ParseJudgeResponse("no json here", "a", "j");
  EXPECT_TRUE(junk.error.has_value());
  EXPECT_EQ(junk.raw_response, "no json here");
}

TEST(ParseJudgeResponseTest, RepairsFencedReply) {
  auto o = ParseJudgeResponse(
      "Sure:\n```json\n{\"p_ac\":0.25,\"s_algo\":2,\"s_robust\":2,\"rationale\":\"a {b}\"}\n```",
      "a", "j");
  EXPECT_TRUE(o.ok()) << *o.error;
  EXPECT_EQ(*o.p_ac, 0.25);
  EXPECT_EQ(o.rationale, "a {b}");
}

TEST(ExtractJsonObjectTest, BalancedBraces) {
  EXPECT_EQ(ExtractJsonObject(R"(x {"a":"}"} y)"), R"({"a":"}"})");
  EXPECT_EQ(ExtractJsonObject("none"), "");
}

TEST(MockJudgeTest, DeterministicAndValid) {
  std::set<double> seen;
  for (int i = 0; i < 50; ++i) {
    auto r = Request("u:p:" + std::to_string(i));
    auto a = MockJudge(r, 3);
    auto b = MockJudge(r, 3);
    EXPECT_EQ(a, b);
    ASSERT_TRUE(a.ok());
    EXPECT_GE(*a.p_ac, 0.0);
    EXPECT_LE(*a.p_ac, 1.0);
    EXPECT_GE(*a.s_algo, 1);
    EXPECT_LE(*a.s_algo, 5);
    EXPECT_GE(*a.s_robust, 1);
    EXPECT_LE(*a.s_robust, 5);
    seen.insert(*a.p_ac);
  }
  EXPECT_GT(seen.size(), 1u);
}

TEST(MockAdapterTest, TransientFailuresRecover) {
  JudgeAdapterSpec spec;
  spec.name = "m";
  spec.mock.mode = MockBehavior::Mode::kTransient;
  spec.mock.transient_failures = 2;
  MockJudgeAdapter adapter(spec);
  auto r = Request("u:p:1");
  EXPECT_FALSE(adapter.Infer(r).ok());
  EXPECT_FALSE(adapter.Infer(r).ok());
  EXPECT_TRUE(adapter.Infer(r).ok());
  EXPECT_EQ(adapter.calls(), 3);
  EXPECT_FALSE(adapter.remote());
}

TEST(AdapterSpecTest, Validation) {
  JudgeAdapterSpec spec;
  spec.name = "x";
  EXPECT_TRUE(spec.Validate().ok());
  spec.name = "";
  EXPECT_FALSE(spec.Validate().ok());
  spec.name = "x";
  spec.provider = Provider::kOpenAI;
  EXPECT_FALSE(spec.Validate().ok());  // model required
  EXPECT_EQ(*ProviderFromName("Anthropic"), Provider::kAnthropic);
  EXPECT_FALSE(ProviderFromName("acme").ok());
}

TEST(PromptTest, RendersRequestWithoutLabels) {
  auto p = RenderJudgePrompt(Request("u:p:1"));
  EXPECT_NE(p.find("int main(){}"), std::string::npos);
  EXPECT_NE(p.find("help"), std::string::npos);
  EXPECT_EQ(p.find("verdict"), std::string::npos);
  EXPECT_FALSE(JudgeInstruction().empty());
}

}  // namespace
}  // namespace cojudge
