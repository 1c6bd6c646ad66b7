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

#include "cojudge/orchestrator.h"

#include <filesystem>
#include <fstream>

#include "cojudge/io.h"
#include "gtest/gtest.h"

namespace cojudge {
namespace {

namespace fs = std::filesystem;

class OrchestratorTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cojudge_orch_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static std::vector<JudgeRequest> Requests(int n) {
    std::vector<JudgeRequest> out;
    for (int i = 0; i < n; ++i) {
      JudgeRequest r;
      char buf[16];
      std::snprintf(buf, sizeof(buf), "u:p:%02d", i + 1);
      r.attempt_id = buf;
      r.problem_id = "p";
      out.push_back(r);
    }
    return out;
  }

  static std::vector<Attempt> Attempts(int n) {
    std::vector<Attempt> out;
    for (auto const& r : Requests(n)) {
      Attempt a;
      a.attempt_id = r.attempt_id;
      a.participant = "u";
      a.problem = "p";
      out.push_back(a);
    }
    return out;
  }

  static InferenceOptions Fast() {
    InferenceOptions o;
    o.sleep = [](std::chrono::duration<double>) {};
    o.clock = [] { return std::string("2026-01-01T00:00:00Z"); };
    return o;
  }

  static RetryOptions FastRetry() {
    RetryOptions o;
    o.sleep = [](std::chrono::duration<double>) {};
    o.clock = [] { return std::string("2026-01-01T00:00:00Z"); };
    return o;
  }

  fs::path dir_;
};

JudgeAdapterSpec Spec(MockBehavior::Mode mode = MockBehavior::Mode::kNone,
                      double fraction = 1.0) {
  JudgeAdapterSpec s;
  s.name = "m";
  s.mock_seed = 1;
  s.mock.mode = mode;
  s.mock.fail_fraction = fraction;
  return s;
}

TEST_F(OrchestratorTest, FlushesEverySaveEvery) {
  MockJudgeAdapter adapter(Spec());
  CheckpointStore store(dir_ / "judge_m.jsonl", "m");
  auto reqs = Requests(25);
  auto stats = RunInference(adapter, reqs, store, Fast());
  ASSERT_TRUE(stats.ok()) << stats.status();
  EXPECT_GE(stats->flushes, 3);
  EXPECT_EQ(stats->calls, 25);
  auto loaded = store.Load();
  ASSERT_TRUE(loaded.ok());
  EXPECT_EQ(loaded->size(), 25u);

  MockJudgeAdapter again(Spec());
  auto rerun = RunInference(again, reqs, store, Fast());
  ASSERT_TRUE(rerun.ok());
  EXPECT_EQ(again.calls(), 0);
  EXPECT_EQ(rerun->skipped, 25);
}

TEST_F(OrchestratorTest, InterruptAtFlushThenResume) {
  auto reqs = Requests(25);
  CheckpointStore store(dir_ / "judge_m.jsonl", "m");
  MockJudgeAdapter first(Spec());
  auto opts = Fast();
  opts.on_flush = [](int flush) { return flush < 1; };
  auto partial = RunInference(first, reqs, store, opts);
  ASSERT_TRUE(partial.ok());
  EXPECT_TRUE(partial->interrupted);
  EXPECT_EQ(store.Load()->size(), 10u);

  MockJudgeAdapter second(Spec());
  auto rest = RunInference(second, reqs, store, Fast());
  ASSERT_TRUE(rest.ok());
  EXPECT_EQ(second.calls(), 15);
  EXPECT_EQ(store.LoadTable()->size(), 25u);
}

TEST_F(OrchestratorTest, RetryOnlyFailed) {
  auto reqs = Requests(20);
  CheckpointStore store(dir_ / "judge_m.jsonl", "m");
  std::vector<JudgeOutput> seed;
  for (int i = 0; i < 20; ++i) {
    JudgeOutput o = MockJudge(reqs[i], 1, "m");
    if (i % 4 == 0) {
      o = JudgeOutput{};
      o.attempt_id = reqs[i].attempt_id;
      o.judge = "m";
      o.error = "TransportFailure: boom";
    }
    seed.push_back(o);
  }
  ASSERT_TRUE(store.Append(seed).ok());
  MockJudgeAdapter adapter(Spec());
  auto out = RetryFailed(adapter, reqs, store, FastRetry());
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(adapter.calls(), 5);
  EXPECT_FALSE(out->exhausted());
  EXPECT_EQ(out->table.size(), 20u);
  for (auto const& o : out->table) EXPECT_TRUE(o.ok());

  MockJudgeAdapter idle(Spec());
  auto clean = RetryFailed(idle, reqs, store, FastRetry());
  ASSERT_TRUE(clean.ok());
  EXPECT_EQ(idle.calls(), 0);
}

TEST_F(OrchestratorTest, RetryExhausts) {
  auto reqs = Requests(3);
  CheckpointStore store(dir_ / "judge_m.jsonl", "m");
  MockJudgeAdapter adapter(Spec(MockBehavior::Mode::kAlways));
  ASSERT_TRUE(RunInference(adapter, reqs, store, Fast()).ok());
  auto out = RetryFailed(adapter, reqs, store, FastRetry());
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out->passes, 3);
  EXPECT_EQ(out->exhausted_ids.size(), 3u);
  EXPECT_EQ(adapter.calls(), 3 + 9);
}

TEST_F(OrchestratorTest, CorruptCheckpointAborts) {
  auto path = dir_ / "judge_m.jsonl";
  std::ofstream(path) << "{\"attempt_id\":\"a\"}\nnot json\n";
  CheckpointStore store(path, "m");
  auto loaded = store.Load();
  ASSERT_FALSE(loaded.ok());
  EXPECT_NE(loaded.status().message().find("CheckpointCorrupt"), std::string::npos);
}

TEST(BackoffTest, GrowsAndCaps) {
  BackoffPolicy b;
  EXPECT_DOUBLE_EQ(b.Delay(1, 0.5).count(), 1.0);
  EXPECT_DOUBLE_EQ(b.Delay(3, 0.5).count(), 4.0);
  EXPECT_DOUBLE_EQ(b.Delay(20, 0.5).count(), 60.0);
  EXPECT_DOUBLE_EQ(b.Delay(1, 0.0).count(), 0.8);
}

std::vector<JudgeOutput> CleanTable(std::vector<Attempt> const& attempts) {
  std::vector<JudgeOutput> out;
  for (auto const& a : attempts) {
    JudgeOutput o;
    o.attempt_id = a.attempt_id;
    o.p_ac = 0.5;
    o.s_algo = o.s_robust = 3;
    out.push_back(o);
  }
  return out;
}

TEST(VerifyTest, FaultClasses) {
  std::vector<Attempt> attempts(3);
  for (int i = 0; i < 3; ++i) attempts[i].attempt_id = "u:p:" + std::to_string(i + 1);
  EXPECT_TRUE(VerifyOutputs(CleanTable(attempts), attempts).accepted);

  auto dropped = CleanTable(attempts);
  dropped.pop_back();
  auto r1 = VerifyOutputs(dropped, attempts);
  EXPECT_FALSE(r1.accepted);
  EXPECT_TRUE(r1.Violates(VerifyCondition::kCount));

  auto dup = CleanTable(attempts);
  dup[2].attempt_id = dup[1].attempt_id;
  auto r2 = VerifyOutputs(dup, attempts);
  EXPECT_TRUE(r2.Violates(VerifyCondition::kUniq));

  auto missing = CleanTable(attempts);
  missing[0].p_ac.reset();
  EXPECT_TRUE(VerifyOutputs(missing, attempts).Violates(VerifyCondition::kMissing));

  auto range = CleanTable(attempts);
  range[0].p_ac = -0.1;
  EXPECT_TRUE(VerifyOutputs(range, attempts).Violates(VerifyCondition::kRange));

  auto err = CleanTable(attempts);
  err[1].error = "boom";
  EXPECT_TRUE(VerifyOutputs(err, attempts).Violates(VerifyCondition::kError));
  EXPECT_EQ(ConditionName(VerifyCondition::kUniq), "uniq");
}

TEST(MergeTest, Cardinality) {
  std::vector<Attempt> attempts(3);
  for (int i = 0; i < 3; ++i) {
    attempts[i].attempt_id = "u:p:" + std::to_string(i + 1);
    attempts[i].participant = "u";
    attempts[i].problem = "p";
    attempts[i].turn = i + 1;
  }
  std::map<GroupKey, Split> splits{{GroupKey{"u", "p"}, Split::kTest}};
  std::map<std::string, std::vector<JudgeOutput>> tables{{"a", CleanTable(attempts)},
                                                        {"b", CleanTable(attempts)}};
  auto merged = MergePredictions(tables, attempts, splits);
  ASSERT_TRUE(merged.ok());
  EXPECT_EQ(merged->long_rows.size(), 6u);
  EXPECT_EQ(merged->wide_rows.size(), 3u);

  auto wide = ParseWideTableCsv(WideTableCsv(*merged));
  ASSERT_TRUE(wide.ok()) << wide.status();
  EXPECT_EQ(wide->judges, merged->judges);
  EXPECT_EQ(WideTableCsv(*wide), WideTableCsv(*merged));

  tables["b"].pop_back();
  auto bad = MergePredictions(tables, attempts, splits);
  EXPECT_EQ(bad.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_NE(bad.status().message().find("UnverifiedInput(b)"), std::string::npos);
}

}  // namespace
}  // namespace cojudge
