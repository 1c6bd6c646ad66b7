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

#ifndef COJUDGE_CONFIG_H_
#define COJUDGE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "cojudge/codebleu.h"
#include "cojudge/ingest.h"
#include "cojudge/judge.h"
#include "cojudge/metrics.h"
#include "cojudge/orchestrator.h"
#include "cojudge/split.h"

namespace cojudge {

struct PipelineConfig {
  std::filesystem::path input_dir;
  std::filesystem::path work_dir;
  std::uint64_t seed = 0;

  SplitConfig split;
  std::vector<JudgeAdapterSpec> judges;

  std::size_t max_code_chars = kMaxCodeChars;
  std::size_t max_prompt_chars = kMaxPromptChars;
  double sleep_seconds = kSleepSeconds;
  int save_every = kSaveEvery;

  int max_retries = 3;
  BackoffPolicy backoff;

  int ece_bins = kEceBins;
  CodeBleuConfig codebleu;

  FieldLabels labels;
  std::string record_separator{kDefaultRecordSeparator};

  absl::Status Validate() const;
};

// The four default judge names; offline they are mock adapters.
std::vector<std::string> DefaultJudgeNames();
JudgeAdapterSpec MockSpecFor(std::string const& name, std::uint64_t seed);

// Defaults with four mock judges.
PipelineConfig DefaultConfig();

using EnvLookup = std::function<std::optional<std::string>(std::string const&)>;
std::optional<std::string> ProcessEnv(std::string const& name);

// JSON config. `${VAR}` interpolation is accepted only for judge api_key
// entries and is resolved to the adapter's credential variable name; keys
// themselves never reach the config object. Relative paths resolve
// against `base_dir`.
absl::StatusOr<PipelineConfig> ParseConfig(std::string_view json_text,
                                           std::filesystem::path const& base_dir = {});
absl::StatusOr<PipelineConfig> LoadConfig(std::filesystem::path const& path);

// Canonical JSON of every setting that influences results (no paths, no
// credential names); hashed into the report provenance.
std::string CanonicalConfigJson(PipelineConfig const& config);

// Replaces every judge with a mock of the same name and zero pacing.
void MakeOffline(PipelineConfig& config);

// Keeps only the named judges, in the given order.
absl::Status SelectJudges(PipelineConfig& config, std::vector<std::string> const& names);

}  // namespace cojudge

#endif  // COJUDGE_CONFIG_H_
