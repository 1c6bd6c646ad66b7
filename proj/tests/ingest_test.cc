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

#include "cojudge/ingest.h"

#include <filesystem>
#include <fstream>

#include "cojudge/html.h"
#include "gtest/gtest.h"

namespace cojudge {
namespace {

namespace fs = std::filesystem;

RawSubmission Raw(std::string name, std::string body) {
  auto r = RawSubmission::Create(std::move(name), std::move(body));
  EXPECT_TRUE(r.ok()) << r.status();
  return *std::move(r);
}

std::string const kMeta =
    "<p>Participant: u1</p><p>Problem: A</p><p>Verdict: AC</p>"
    "<p>Submitted: 2026-03-01 10:00:05</p><p>Language: GNU C++17</p>";

PartialAttempt Partial(std::string u, std::string p, std::string ts, std::string path,
                       std::string verdict = "WA") {
  PartialAttempt a;
  a.participant = std::move(u);
  a.problem = std::move(p);
  a.timestamp = *ParseTimestamp(ts);
  a.source_path = std::move(path);
  a.verdict = std::move(verdict);
  a.code = "x";
  return a;
}

TEST(FormatTest, FromExtension) {
  EXPECT_EQ(*FormatFromPath("a/b.HTML"), ArtifactFormat::kHtml);
  EXPECT_EQ(*FormatFromPath("b.htm"), ArtifactFormat::kHtm);
  EXPECT_EQ(*FormatFromPath("b.md"), ArtifactFormat::kMarkdown);
  EXPECT_EQ(*FormatFromPath("b.txt"), ArtifactFormat::kText);
  EXPECT_FALSE(FormatFromPath("b.pdf").ok());
  EXPECT_FALSE(RawSubmission::Create("x.md", "  \n ").ok());
}

TEST(TimestampTest, Normalizes) {
  auto a = ParseTimestamp("2026-03-01T10:00:05+02:00");
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a->iso, "2026-03-01T08:00:05Z");
  auto b = ParseTimestamp("2026-03-01 08:00:05.250");
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(b->epoch_millis - a->epoch_millis, 250);
  EXPECT_FALSE(ParseTimestamp("yesterday").ok());
}

TEST(ParseSubmissionTest, HtmlLongestPre) {
  auto p = ParseSubmission(Raw("s.html", kMeta + "<pre>ab</pre><pre>abcdef</pre>"));
  ASSERT_TRUE(p.ok()) << p.status();
  EXPECT_EQ(p->code, "abcdef");
  EXPECT_EQ(p->participant, "u1");
  EXPECT_EQ(p->problem, "A");
  EXPECT_EQ(p->verdict, "AC");
  EXPECT_EQ(p->language, "GNU C++17");
}

TEST(ParseSubmissionTest, HtmlCodeFallbackAndEntities) {
  auto p = ParseSubmission(Raw("s.html", kMeta + "<code>x=1</code>"));
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p->code, "x=1");
  auto q = ParseSubmission(Raw("s.html", kMeta + "<pre>a &lt; b &amp;&amp; c</pre>"));
  ASSERT_TRUE(q.ok());
  EXPECT_EQ(q->code, "a < b && c");
}

TEST(ParseSubmissionTest, ScriptExcludedFromVisibleText) {
  auto raw = Raw("s.html", "<script>junk()</script><pre>main</pre>");
  EXPECT_EQ(ExtractVisibleText(raw).find("junk()"), std::string::npos);
  EXPECT_NE(ExtractVisibleText(raw).find("main"), std::string::npos);
}

TEST(ParseSubmissionTest, MarkdownTableAndFence) {
  std::string body =
      "# Submission\n\n| Field | Value |\n|---|---|\n| Problem | B |\n| Verdict | WA |\n"
      "| Submitted | 2026-03-01T11:00:00Z |\n\n```python\nprint(1)\n```\n";
  SubmissionParseOptions opts;
  opts.default_participant = "u7";
  auto p = ParseSubmission(Raw("s.md", body), opts);
  ASSERT_TRUE(p.ok()) << p.status();
  EXPECT_EQ(p->participant, "u7");
  EXPECT_EQ(p->problem, "B");
  EXPECT_EQ(p->code, "print(1)\n");
  EXPECT_EQ(p->language, "python");
}

TEST(ParseSubmissionTest, MissingFields) {
  auto none = ParseSubmission(Raw("s.html", kMeta));
  EXPECT_EQ(none.status().code(), absl::StatusCode::kNotFound);
  EXPECT_NE(none.status().message().find("MissingCode"), std::string::npos);
  auto nov = ParseSubmission(Raw("s.txt", "Participant: u\nProblem: A\n~~~\nx\n~~~\n"));
  EXPECT_NE(nov.status().message().find("MissingField(verdict)"), std::string::npos);
}

TEST(ParseSubmissionTest, ConfigurableLabels) {
  SubmissionParseOptions opts;
  opts.labels.verdict = {"judgement"};
  auto p = ParseSubmission(
      Raw("s.txt", "User: u\nTask: C\nJudgement: AC\nTime: 2026-01-01 00:00\n~~~\ny\n~~~\n"),
      opts);
  ASSERT_TRUE(p.ok()) << p.status();
  EXPECT_EQ(p->verdict, "AC");
}

TEST(AttemptTableTest, TurnsIdsAndLabels) {
  std::vector<PartialAttempt> subs{
      Partial("u", "p", "2026-01-01 10:00", "b"), Partial("u", "p", "2026-01-01 09:00", "a", "AC"),
      Partial("v", "p", "2026-01-01 08:00", "c"), Partial("u", "p", "2026-01-01 10:00", "a2")};
  auto t = BuildAttemptTable(subs);
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t[0].attempt_id, "u:p:1");
  EXPECT_EQ(t[0].label, 1);
  EXPECT_EQ(t[1].source_path, "a2");  // tie broken by source path
  EXPECT_EQ(t[2].attempt_id, "u:p:3");
  EXPECT_EQ(t[3].attempt_id, "v:p:1");
  EXPECT_EQ(LabelFromVerdict("WA"), 0);
  EXPECT_EQ(LabelFromVerdict("AC"), 1);
}

TEST(ContextTest, AttachAndMissing) {
  std::vector<Attempt> table(3);
  table[0].participant = table[1].participant = "u";
  table[2].participant = "w";
  std::map<std::string, ParticipantContext> ctx;
  ctx["u"].aggregated = "X";
  auto out = AttachContext(table, ctx);
  EXPECT_EQ(out[0].prompt_text, "X");
  EXPECT_EQ(out[1].prompt_text, "X");
  EXPECT_EQ(out[2].prompt_text, "");
  EXPECT_TRUE(out[2].missing_context);
}

class PromptLogTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "cojudge_prompt_logs";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path Write(std::string name, std::string body) {
    auto p = dir_ / name;
    std::ofstream(p) << body;
    return p;
  }
  fs::path dir_;
};

TEST_F(PromptLogTest, OrderingSeparatorAndEmpty) {
  auto a = Write("log_001.md", "p1");
  auto b = Write("log_002.html", "<p>p2</p><script>x</script>");
  auto e = Write("log_003.txt", "   ");
  std::vector<fs::path> forward{a, b, e};
  std::vector<fs::path> reversed{e, b, a};
  auto f = ParsePromptLogs(forward, "u");
  auto r = ParsePromptLogs(reversed, "u");
  ASSERT_TRUE(f.ok() && r.ok());
  EXPECT_EQ(f->context.aggregated, "p1\n-----\np2");
  EXPECT_EQ(r->context.aggregated, f->context.aggregated);
  EXPECT_EQ(f->context.record_count, 2);
  ASSERT_EQ(f->warnings.size(), 1u);
  EXPECT_NE(f->warnings[0].find("EmptyLog"), std::string::npos);

  std::vector<fs::path> single{a};
  auto s = ParsePromptLogs(single, "u");
  EXPECT_EQ(s->context.aggregated, "p1");
  EXPECT_EQ(s->context.record_count, 1);
}

}  // namespace
}  // namespace cojudge
