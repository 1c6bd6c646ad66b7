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

#include "cojudge/pipeline.h"

#include <filesystem>

#include "cojudge/io.h"
#include "cojudge/synth.h"
#include "gtest/gtest.h"
#include "nlohmann/json.hpp"

namespace cojudge {
namespace {

namespace fs = std::filesystem;

class PipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    corpus_ = new fs::path(fs::temp_directory_path() / "cojudge_pipeline_corpus");
    fs::remove_all(*corpus_);
    SynthOptions o;
    o.seed = 3;
    o.participants = 6;
    o.problems = 5;
    o.attempts = 70;
    ASSERT_TRUE(GenerateSyntheticCorpus(*corpus_, o).ok());
  }
  static void TearDownTestSuite() {
    fs::remove_all(*corpus_);
    delete corpus_;
  }

  void SetUp() override {
    work_ = fs::temp_directory_path() /
            ("cojudge_pipeline_" +
             std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(work_);
  }
  void TearDown() override { fs::remove_all(work_); }

  PipelineConfig Config(fs::path work) const {
    auto c = DefaultConfig();
    c.input_dir = *corpus_;
    c.work_dir = std::move(work);
    c.seed = 3;
    c.split.seed = 3;
    c.save_every = 10;
    MakeOffline(c);
    return c;
  }

  static PipelineOptions Quiet() {
    PipelineOptions o;
    o.sleep = [](std::chrono::duration<double>) {};
    o.clock = [] { return std::string("2026-01-01T00:00:00Z"); };
    return o;
  }

  static fs::path* corpus_;
  fs::path work_;
};

fs::path* PipelineTest::corpus_ = nullptr;

TEST_F(PipelineTest, OfflineRunIsDeterministic) {
  Pipeline first(Config(work_ / "a"), Quiet());
  auto out = first.Run();
  ASSERT_EQ(out.ExitCode(), 0) << out.cause;
  Pipeline second(Config(work_ / "b"), Quiet());
  ASSERT_EQ(second.Run().ExitCode(), 0);
  auto a = ReadFile(work_ / "a" / "report.json");
  auto b = ReadFile(work_ / "b" / "report.json");
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(*a, *b);

  auto report = nlohmann::json::parse(*a);
  EXPECT_EQ(report["schema"], "cojudge.report/1");
  EXPECT_TRUE(fs::exists(work_ / "a" / "plots" / "roc_points.csv"));

  // Rerunning only the report stage over finished artifacts is a no-op.
  Pipeline again(Config(work_ / "a"), Quiet());
  ASSERT_TRUE(again.RunStage(Stage::kReport).ok());
  EXPECT_EQ(*ReadFile(work_ / "a" / "report.json"), *a);
}

TEST_F(PipelineTest, FailingJudgeIsAbsent) {
  auto c = Config(work_);
  c.judges[1].mock.mode = MockBehavior::Mode::kAlways;
  c.judges[1].mock.fail_fraction = 0.2;
  c.max_retries = 1;
  Pipeline p(c, Quiet());
  auto out = p.Run();
  EXPECT_EQ(out.ExitCode(), 2);
  ASSERT_EQ(out.absent_judges.size(), 1u);
  EXPECT_EQ(out.absent_judges[0], c.judges[1].name);
  auto report = nlohmann::json::parse(*ReadFile(work_ / "report.json"));
  auto dump = report.dump();
  EXPECT_NE(dump.find("verification failed"), std::string::npos);
}

TEST_F(PipelineTest, InterruptedJudgeResumes) {
  Pipeline reference(Config(work_ / "ref"), Quiet());
  ASSERT_EQ(reference.Run().ExitCode(), 0);

  auto opts = Quiet();
  opts.on_flush = [](std::string const& judge, int flush) {
    return !(judge == "gemini" && flush == 2);
  };
  Pipeline broken(Config(work_ / "cut"), opts);
  auto out = broken.Run();
  EXPECT_TRUE(out.interrupted);
  EXPECT_EQ(out.ExitCode(), 3);

  Pipeline resumed(Config(work_ / "cut"), Quiet());
  ASSERT_EQ(resumed.Run({Stage::kJudge, Stage::kVerify, Stage::kMerge}).ExitCode(), 0);
  EXPECT_EQ(*ReadFile(work_ / "cut" / "predictions_wide.csv"),
            *ReadFile(work_ / "ref" / "predictions_wide.csv"));
}

TEST_F(PipelineTest, MissingInputFailsIngest) {
  auto c = Config(work_);
  c.input_dir = work_ / "does-not-exist";
  Pipeline p(c, Quiet());
  auto out = p.Run();
  ASSERT_TRUE(out.failed_stage.has_value());
  EXPECT_EQ(*out.failed_stage, Stage::kIngest);
  EXPECT_EQ(out.ExitCode(), 3);
  EXPECT_NE(out.cause.message().find("StageFailure(ingest)"), std::string::npos);
}

TEST(StageTest, Names) {
  for (auto s : AllStages()) EXPECT_EQ(*StageFromName(StageName(s)), s);
  EXPECT_FALSE(StageFromName("deploy").ok());
  EXPECT_EQ(AllStages().size(), 9u);
}

}  // namespace
}  // namespace cojudge
