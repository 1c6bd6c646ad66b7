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

#include "cojudge/synth.h"

#include <filesystem>
#include <map>

#include "cojudge/ingest.h"
#include "cojudge/io.h"
#include "gtest/gtest.h"

namespace cojudge {
namespace {

namespace fs = std::filesystem;

std::map<std::string, std::string> Snapshot(fs::path const& dir) {
  std::map<std::string, std::string> out;
  for (auto const& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).generic_string()] = *ReadFile(e.path());
  }
  return out;
}

class SynthTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() / "cojudge_synth_test";
    fs::remove_all(root_);
  }
  void TearDown() override { fs::remove_all(root_); }
  fs::path root_;
};

TEST_F(SynthTest, SameSeedSameBytes) {
  SynthOptions o;
  o.seed = 4;
  o.participants = 4;
  o.problems = 3;
  o.attempts = 30;
  ASSERT_TRUE(GenerateSyntheticCorpus(root_ / "a", o).ok());
  ASSERT_TRUE(GenerateSyntheticCorpus(root_ / "b", o).ok());
  EXPECT_EQ(Snapshot(root_ / "a"), Snapshot(root_ / "b"));
  o.seed = 5;
  ASSERT_TRUE(GenerateSyntheticCorpus(root_ / "c", o).ok());
  EXPECT_NE(Snapshot(root_ / "a"), Snapshot(root_ / "c"));
}

TEST_F(SynthTest, SingleTrajectory) {
  SynthOptions o;
  o.participants = 1;
  o.problems = 1;
  o.attempts = 3;
  o.density = 1.0;
  auto s = GenerateSyntheticCorpus(root_, o);
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_EQ(s->trajectories, 1);
  auto ingest = IngestCorpus(root_);
  ASSERT_TRUE(ingest.ok()) << ingest.status();
  ASSERT_EQ(ingest->attempts.size(), 3u);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(ingest->attempts[k].turn, k + 1);
}

TEST_F(SynthTest, DefaultShapeIngestsCleanly) {
  SynthOptions o;
  o.seed = 7;
  auto s = GenerateSyntheticCorpus(root_, o);
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->participants, 15);
  EXPECT_EQ(s->trajectories, 184);
  EXPECT_EQ(s->attempts, 517);
  auto ingest = IngestCorpus(root_);
  ASSERT_TRUE(ingest.ok());
  EXPECT_EQ(ingest->attempts.size(), 517u);
  EXPECT_TRUE(ingest->warnings.empty());
  int solved = 0;
  std::map<std::pair<std::string, std::string>, int> groups;
  for (auto const& a : ingest->attempts) groups[{a.participant, a.problem}] |= a.label;
  for (auto const& [g, l] : groups) solved += l;
  EXPECT_EQ(static_cast<int>(groups.size()), 184);
  EXPECT_EQ(solved, s->solved_trajectories);
  EXPECT_EQ(ingest->contexts.size(), 15u);
}

}  // namespace
}  // namespace cojudge
