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

#ifndef COJUDGE_SPLIT_H_
#define COJUDGE_SPLIT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cojudge/ingest.h"

namespace cojudge {

enum class Split { kTrain, kVal, kTest };

std::string_view SplitName(Split s);
absl::StatusOr<Split> SplitFromName(std::string_view name);

inline constexpr std::size_t kMaxCodeChars = 12000;
inline constexpr std::size_t kMaxPromptChars = 12000;

struct SplitConfig {
  std::array<double, 3> ratios{0.8, 0.1, 0.1};  // train, val, test
  std::uint64_t seed = 0;
  bool stratify = true;

  absl::Status Validate() const;
};

// Trajectory key (participant, problem).
struct GroupKey {
  std::string participant;
  std::string problem;

  friend auto operator<=>(GroupKey const&, GroupKey const&) = default;
  friend bool operator==(GroupKey const&, GroupKey const&) = default;
};

struct LabeledGroup {
  GroupKey group;
  // Stratification label; 1 when the trajectory has an accepted attempt.
  int label = 0;
};

struct SplitAssignment {
  GroupKey group;
  Split split;
};

struct GroupSplitResult {
  std::vector<SplitAssignment> assignments;  // sorted by group
  std::vector<std::string> warnings;         // InsufficientGroups(...)
};

// Target split sizes for n groups: val and test are round(ratio * n), train
// takes the remainder.
std::array<std::size_t, 3> SplitSizes(std::size_t n,
                                      std::array<double, 3> const& ratios);

// Each group lands in exactly one split and overall sizes follow
// SplitSizes. With stratify, the val/test quotas are apportioned across
// label strata by largest remainder and groups are drawn independently
// within each stratum. A stratum smaller than the number of non-empty
// splits goes entirely to train (with a warning).
absl::StatusOr<GroupSplitResult> GroupSplit(std::span<LabeledGroup const> groups,
                                            SplitConfig const& config);

// One LabeledGroup per (participant, problem) present in the table.
std::vector<LabeledGroup> GroupsFromAttempts(std::span<Attempt const> table);

struct JudgeRequest {
  std::string attempt_id;
  Split split = Split::kTrain;
  std::string problem_id;
  std::string language;
  std::string source_code;
  std::string prompt_text;

  friend bool operator==(JudgeRequest const&, JudgeRequest const&) = default;
};

// Head-truncates code and prompt to the character budgets. Verdicts and
// labels are never copied. Fails with NotFound "UncoveredGroup(u:p)".
absl::StatusOr<std::vector<JudgeRequest>> SerializeRequests(
    std::span<Attempt const> table, std::span<SplitAssignment const> assignment,
    std::size_t max_code = kMaxCodeChars, std::size_t max_prompt = kMaxPromptChars);

// requests.jsonl: one object per line with exactly the keys attempt_id,
// split, problem_id, language, source_code, prompt_text.
std::string RequestToJsonLine(JudgeRequest const& request);
std::string RequestsToJsonl(std::span<JudgeRequest const> requests);
absl::StatusOr<std::vector<JudgeRequest>> ParseRequestsJsonl(std::string_view text);

// splits.csv: participant, problem, split.
std::string AssignmentsToCsv(std::span<SplitAssignment const> assignments);
absl::StatusOr<std::vector<SplitAssignment>> ParseAssignmentsCsv(
    std::string_view text);

// Lookup helper: group -> split.
std::map<GroupKey, Split> AssignmentMap(std::span<SplitAssignment const> a);

}  // namespace cojudge

#endif  // COJUDGE_SPLIT_H_
