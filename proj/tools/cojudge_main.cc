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

// cojudge: stage-wise command line driver.
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cojudge/config.h"
#include "cojudge/pipeline.h"
#include "cojudge/synth.h"

namespace {

struct CommonFlags {
  std::string config;
  std::string input;
  std::string work;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> judges;
  bool offline = false;
  bool quiet = false;
};

void AddCommon(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Pipeline config (JSON)");
  cmd->add_option("--input", f.input, "Input corpus directory (overrides config)");
  cmd->add_option("--work", f.work, "Work directory (overrides config)");
  cmd->add_option("--seed", f.seed, "Seed for splitting, retries and projections");
  cmd->add_option("--judges", f.judges, "Comma-separated judge names")->delimiter(',');
  cmd->add_flag("--offline", f.offline, "Replace every judge with a local mock");
  cmd->add_flag("--quiet", f.quiet, "Suppress progress output");
}

absl::StatusOr<cojudge::PipelineConfig> BuildConfig(CommonFlags const& f) {
  cojudge::PipelineConfig config = cojudge::DefaultConfig();
  if (!f.config.empty()) {
    auto loaded = cojudge::LoadConfig(f.config);
    if (!loaded.ok()) return loaded.status();
    config = *std::move(loaded);
  }
  if (!f.input.empty()) config.input_dir = f.input;
  if (!f.work.empty()) config.work_dir = f.work;
  if (f.seed) {
    config.seed = *f.seed;
    config.split.seed = *f.seed;
    config.backoff.seed = *f.seed;
    for (auto& j : config.judges) {
      if (j.provider == cojudge::Provider::kMock) j.mock_seed = cojudge::MockSpecFor(j.name, *f.seed).mock_seed;
    }
  }
  if (!f.judges.empty()) {
    if (auto s = cojudge::SelectJudges(config, f.judges); !s.ok()) return s;
  }
  if (f.offline) cojudge::MakeOffline(config);
  if (config.work_dir.empty()) return absl::InvalidArgumentError("no work directory (--work or work_dir)");
  if (auto s = config.Validate(); !s.ok()) return s;
  return config;
}

int RunStages(CommonFlags const& f, std::vector<cojudge::Stage> const& stages) {
  auto config = BuildConfig(f);
  if (!config.ok()) {
    std::cerr << "cojudge: " << config.status().message() << "\n";
    return 3;
  }
  cojudge::PipelineOptions options;
  if (!f.quiet) options.log = &std::cerr;
  cojudge::Pipeline pipeline(*std::move(config), options);
  auto const outcome = pipeline.Run(stages);
  if (outcome.failed_stage || outcome.interrupted) {
    std::cerr << "cojudge: " << outcome.cause.message() << "\n";
  }
  for (auto const& j : outcome.absent_judges) {
    std::cerr << "cojudge: judge " << j << " rejected by verification\n";
  }
  return outcome.ExitCode();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reliability-aware LLM judge evaluation pipeline"};
  app.require_subcommand(1);

  std::vector<std::pair<CLI::App*, cojudge::Stage>> stage_cmds;
  CommonFlags flags;
  for (auto stage : cojudge::AllStages()) {
    auto name = std::string(cojudge::StageName(stage));
    auto* cmd = app.add_subcommand(name, "Run the " + name + " stage");
    AddCommon(cmd, flags);
    stage_cmds.emplace_back(cmd, stage);
  }

  std::string stage_name;
  auto* run = app.add_subcommand("run", "Run the full pipeline (or one --stage)");
  AddCommon(run, flags);
  run->add_option("--stage", stage_name, "Run only this stage");

  cojudge::SynthOptions synth;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic input corpus");
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");
  synth_cmd->add_option("--participants", synth.participants, "Participants");
  synth_cmd->add_option("--problems", synth.problems, "Problems");
  synth_cmd->add_option("--attempts", synth.attempts, "Total submission attempts");

  CLI11_PARSE(app, argc, argv);

  if (*synth_cmd) {
    auto summary = cojudge::GenerateSyntheticCorpus(synth_out, synth);
    if (!summary.ok()) {
      std::cerr << "cojudge: " << summary.status().message() << "\n";
      return 3;
    }
    std::cout << "participants=" << summary->participants
              << " trajectories=" << summary->trajectories << " attempts=" << summary->attempts
              << " solved=" << summary->solved_trajectories
              << " prompt_logs=" << summary->prompt_logs << "\n";
    return 0;
  }
  if (*run) {
    if (stage_name.empty()) return RunStages(flags, cojudge::AllStages());
    auto stage = cojudge::StageFromName(stage_name);
    if (!stage.ok()) {
      std::cerr << "cojudge: " << stage.status().message() << "\n";
      return 3;
    }
    return RunStages(flags, {*stage});
  }
  for (auto const& [cmd, stage] : stage_cmds) {
    if (*cmd) return RunStages(flags, {stage});
  }
  return 3;
}
