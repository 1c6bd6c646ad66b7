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

#ifndef COJUDGE_SYNTH_H_
#define COJUDGE_SYNTH_H_

#include <cstdint>
#include <filesystem>

#include "absl/status/statusor.h"

namespace cojudge {

struct SynthOptions {
  std::uint64_t seed = 0;
  int participants = 15;
  int problems = 13;
  int attempts = 517;
  // Fraction of the participant x problem grid that is attempted.
  double density = 184.0 / 195.0;
  int max_trajectory_length = 30;
  double solve_rate = 0.88;
  // Probability that a solved trajectory is accepted on its first turn.
  double first_turn_solve = 0.6;
  // Expected number of edit operations between consecutive attempts.
  double revision_edits = 3.0;
  // Total prompt-log files; 0 derives 83/517 of `attempts`.
  int prompt_logs = 0;
};

struct SynthSummary {
  int participants = 0;
  int trajectories = 0;
  int attempts = 0;
  int solved_trajectories = 0;
  int prompt_logs = 0;
};

// Writes <dir>/<participant>/{submissions,prompts}/ with mixed HTML,
// Markdown and plain-text artifacts. Deterministic for a fixed seed.
absl::StatusOr<SynthSummary> GenerateSyntheticCorpus(std::filesystem::path const& dir,
                                                     SynthOptions const& options = {});

}  // namespace cojudge

#endif  // COJUDGE_SYNTH_H_
