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

#include <algorithm>
#include <mutex>
#include <thread>

#include "absl/strings/str_cat.h"
#include "cojudge/io.h"
#include "cojudge/split.h"
#include "cojudge/text.h"
#include "nlohmann/json.hpp"

namespace cojudge {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;
using OJson = nlohmann::ordered_json;

constexpr std::string_view kVerificationFailed = "verification failed";

absl::Status WriteText(fs::path const& path, std::string const& body) {
  return WriteFileAtomic(path, body);
}

absl::StatusOr<Json> ReadJson(fs::path const& path) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  auto j = Json::parse(*text, nullptr, false);
  if (j.is_discarded()) return absl::DataLossError(absl::StrCat(path.string(), " is not valid JSON"));
  return j;
}

OJson VerificationJson(std::vector<JudgeVerdict> const& verdicts) {
  OJson out = OJson::array();
  for (auto const& v : verdicts) {
    OJson j;
    j["judge"] = v.judge;
    j["accepted"] = v.accepted;
    j["reason"] = v.reason;
    OJson violations = OJson::array();
    for (auto const& c : v.report.violations) {
      violations.push_back({{"condition", std::string(ConditionName(c.condition))},
                            {"count", c.attempt_ids.size()},
                            {"attempt_ids", c.attempt_ids},
                            {"detail", c.detail}});
    }
    j["violations"] = violations;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace

std::string_view StageName(Stage s) {
  switch (s) {
    case Stage::kIngest:
      return "ingest";
    case Stage::kSplit:
      return "split";
    case Stage::kSerialize:
      return "serialize";
    case Stage::kJudge:
      return "judge";
    case Stage::kVerify:
      return "verify";
    case Stage::kMerge:
      return "merge";
    case Stage::kEval:
      return "eval";
    case Stage::kTrajectory:
      return "trajectory";
    case Stage::kReport:
      return "report";
  }
  return "unknown";
}

absl::StatusOr<Stage> StageFromName(std::string_view name) {
  for (auto s : AllStages()) {
    if (StageName(s) == name) return s;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown stage '", std::string(name), "'"));
}

std::vector<Stage> AllStages() {
  return {Stage::kIngest, Stage::kSplit, Stage::kSerialize, Stage::kJudge, Stage::kVerify,
          Stage::kMerge,  Stage::kEval,  Stage::kTrajectory, Stage::kReport};
}

int PipelineOutcome::ExitCode() const {
  if (failed_stage || interrupted) return 3;
  if (!absent_judges.empty()) return 2;
  return 0;
}

Pipeline::Pipeline(PipelineConfig config, PipelineOptions options)
    : config_(std::move(config)), options_(std::move(options)) {}

fs::path Pipeline::Path(std::string_view name) const { return config_.work_dir / name; }

void Pipeline::Log(std::string_view line) const {
  if (options_.log != nullptr) *options_.log << line << '\n';
}

absl::Status Pipeline::RunStage(Stage stage) {
  absl::Status s;
  switch (stage) {
    case Stage::kIngest:
      s = Ingest();
      break;
    case Stage::kSplit:
      s = SplitStage();
      break;
    case Stage::kSerialize:
      s = Serialize();
      break;
    case Stage::kJudge:
      s = Judge();
      break;
    case Stage::kVerify:
      s = Verify();
      break;
    case Stage::kMerge:
      s = Merge();
      break;
    case Stage::kEval:
      s = Eval();
      break;
    case Stage::kTrajectory:
      s = Trajectory();
      break;
    case Stage::kReport:
      s = Report();
      break;
  }
  if (s.ok()) return s;
  return absl::Status(s.code(), absl::StrCat("StageFailure(", std::string(StageName(stage)),
                                             "): ", std::string(s.message())));
}

PipelineOutcome Pipeline::Run(std::vector<Stage> const& stages) {
  PipelineOutcome outcome;
  if (auto s = config_.Validate(); !s.ok()) {
    outcome.failed_stage = stages.empty() ? Stage::kIngest : stages.front();
    outcome.cause = s;
    return outcome;
  }
  for (auto stage : stages) {
    Log(absl::StrCat("stage ", std::string(StageName(stage))));
    auto s = RunStage(stage);
    if (interrupted_) {
      outcome.interrupted = true;
      outcome.cause = s.ok() ? absl::AbortedError("interrupted") : s;
      return outcome;
    }
    if (!s.ok()) {
      outcome.failed_stage = stage;
      outcome.cause = s;
      Log(std::string(s.message()));
      return outcome;
    }
  }
  bool const judged = std::any_of(stages.begin(), stages.end(),
                                  [](Stage s) { return s >= Stage::kJudge; });
  if (!judged) return outcome;
  if (auto v = LoadVerification(); v.ok()) {
    for (auto const& j : *v) {
      if (!j.accepted) outcome.absent_judges.push_back(j.judge);
    }
  }
  return outcome;
}

absl::Status Pipeline::Ingest() {
  if (config_.input_dir.empty()) return absl::InvalidArgumentError("no input_dir configured");
  if (!fs::is_directory(config_.input_dir)) {
    return absl::NotFoundError(absl::StrCat("input_dir ", config_.input_dir.string(),
                                            " is not a directory"));
  }
  IngestOptions opts;
  opts.parse.labels = config_.labels;
  opts.separator = config_.record_separator;
  auto result = IngestCorpus(config_.input_dir, opts);
  if (!result.ok()) return result.status();
  if (result->attempts.empty()) return absl::FailedPreconditionError("no attempts ingested");
  Log(absl::StrCat("ingested ", result->attempts.size(), " attempts, ", result->warnings.size(),
                   " warnings"));
  return WriteIngestArtifacts(config_.work_dir, *result);
}

absl::Status Pipeline::SplitStage() {
  auto ingest = LoadIngestArtifacts(config_.work_dir);
  if (!ingest.ok()) return ingest.status();
  auto const groups = GroupsFromAttempts(ingest->attempts);
  auto split = GroupSplit(groups, config_.split);
  if (!split.ok()) return split.status();
  if (auto s = WriteText(Path(artifact::kSplits), AssignmentsToCsv(split->assignments)); !s.ok()) {
    return s;
  }
  std::array<std::size_t, 3> sizes{};
  for (auto const& a : split->assignments) ++sizes[static_cast<int>(a.split)];
  OJson report;
  report["groups"] = split->assignments.size();
  report["train"] = sizes[0];
  report["val"] = sizes[1];
  report["test"] = sizes[2];
  report["ratios"] = config_.split.ratios;
  report["seed"] = config_.split.seed;
  report["stratify"] = config_.split.stratify;
  report["warnings"] = split->warnings;
  return WriteText(Path(artifact::kSplitReport), report.dump(2) + "\n");
}

absl::Status Pipeline::Serialize() {
  auto ingest = LoadIngestArtifacts(config_.work_dir);
  if (!ingest.ok()) return ingest.status();
  auto text = ReadFile(Path(artifact::kSplits));
  if (!text.ok()) return text.status();
  auto assignments = ParseAssignmentsCsv(*text);
  if (!assignments.ok()) return assignments.status();
  auto requests = SerializeRequests(ingest->attempts, *assignments, config_.max_code_chars,
                                    config_.max_prompt_chars);
  if (!requests.ok()) return requests.status();
  return WriteText(Path(artifact::kRequests), RequestsToJsonl(*requests));
}

absl::Status Pipeline::Judge() {
  auto ingest = LoadIngestArtifacts(config_.work_dir);
  if (!ingest.ok()) return ingest.status();
  auto text = ReadFile(Path(artifact::kRequests));
  if (!text.ok()) return text.status();
  auto requests = ParseRequestsJsonl(*text);
  if (!requests.ok()) return requests.status();
  auto const& attempts = ingest->attempts;

  struct Slot {
    std::unique_ptr<JudgeAdapter> adapter;
    absl::Status status;
    bool interrupted = false;
    std::string unavailable;
  };
  std::vector<Slot> slots(config_.judges.size());
  for (std::size_t i = 0; i < config_.judges.size(); ++i) {
    auto adapter = MakeJudgeAdapter(config_.judges[i]);
    if (adapter.ok()) {
      slots[i].adapter = *std::move(adapter);
    } else {
      slots[i].unavailable = std::string(adapter.status().message());
    }
  }

  std::mutex log_mu;
  auto run_one = [&](std::size_t i) {
    auto& slot = slots[i];
    auto const& spec = config_.judges[i];
    CheckpointStore store(CheckpointStore::PathFor(Path(artifact::kCheckpoints), spec.name),
                          spec.name);
    JudgeRunOptions opts;
    opts.inference.save_every = config_.save_every;
    opts.inference.sleep_seconds = spec.sleep_seconds.value_or(config_.sleep_seconds);
    opts.inference.sleep = options_.sleep;
    opts.inference.clock = options_.clock;
    if (options_.on_flush) {
      opts.inference.on_flush = [&, name = spec.name](int flush) {
        return options_.on_flush(name, flush);
      };
    }
    opts.retry.max_retries = config_.max_retries;
    opts.retry.backoff = config_.backoff;
    opts.retry.backoff.seed = config_.backoff.seed ^ Fnv1a64(spec.name);
    opts.retry.sleep_seconds = opts.inference.sleep_seconds;
    opts.retry.sleep = options_.sleep;
    opts.retry.clock = options_.clock;
    auto result = RunJudge(*slot.adapter, *requests, attempts, store, opts);
    if (!result.ok()) {
      slot.status = result.status();
      return;
    }
    slot.interrupted = result->inference.interrupted;
    std::lock_guard<std::mutex> lock(log_mu);
    Log(absl::StrCat("judge ", spec.name, ": ", result->inference.calls, " calls, ",
                     result->inference.skipped, " resumed, ", result->retry.calls, " retries, ",
                     result->verification.accepted ? "accepted" : "rejected"));
  };

  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].adapter) threads.emplace_back(run_one, i);
  }
  for (auto& t : threads) t.join();

  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i].status.ok()) {
      return absl::Status(slots[i].status.code(),
                          absl::StrCat("judge ", config_.judges[i].name, ": ",
                                       std::string(slots[i].status.message())));
    }
    if (slots[i].interrupted) interrupted_ = true;
  }
  if (interrupted_) return absl::AbortedError("judge stage interrupted at a flush boundary");

  std::map<std::string, std::string> unavailable;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i].unavailable.empty()) unavailable[config_.judges[i].name] = slots[i].unavailable;
  }
  std::vector<JudgeVerdict> verdicts;
  for (auto const& spec : config_.judges) {
    JudgeVerdict v;
    v.judge = spec.name;
    if (auto it = unavailable.find(spec.name); it != unavailable.end()) {
      v.reason = absl::StrCat("adapter unavailable: ", it->second);
      verdicts.push_back(std::move(v));
      continue;
    }
    CheckpointStore store(CheckpointStore::PathFor(Path(artifact::kCheckpoints), spec.name),
                          spec.name);
    auto table = store.LoadTable();
    if (!table.ok()) return table.status();
    v.report = VerifyOutputs(*table, attempts);
    v.accepted = v.report.accepted;
    if (!v.accepted) v.reason = std::string(kVerificationFailed);
    verdicts.push_back(std::move(v));
  }
  return WriteText(Path(artifact::kVerification), VerificationJson(verdicts).dump(2) + "\n");
}

absl::Status Pipeline::Verify() {
  auto ingest = LoadIngestArtifacts(config_.work_dir);
  if (!ingest.ok()) return ingest.status();
  std::map<std::string, std::string> prior;
  if (auto v = LoadVerification(); v.ok()) {
    for (auto const& j : *v) {
      if (StartsWith(j.reason, "adapter unavailable")) prior[j.judge] = j.reason;
    }
  }
  std::vector<JudgeVerdict> verdicts;
  for (auto const& spec : config_.judges) {
    JudgeVerdict v;
    v.judge = spec.name;
    auto const path = CheckpointStore::PathFor(Path(artifact::kCheckpoints), spec.name);
    if (!fs::exists(path) && prior.count(spec.name)) {
      v.reason = prior[spec.name];
      verdicts.push_back(std::move(v));
      continue;
    }
    CheckpointStore store(path, spec.name);
    auto table = store.LoadTable();
    if (!table.ok()) return table.status();
    v.report = VerifyOutputs(*table, ingest->attempts);
    v.accepted = v.report.accepted;
    if (!v.accepted) v.reason = std::string(kVerificationFailed);
    verdicts.push_back(std::move(v));
  }
  return WriteText(Path(artifact::kVerification), VerificationJson(verdicts).dump(2) + "\n");
}

absl::StatusOr<std::vector<JudgeVerdict>> Pipeline::LoadVerification() const {
  auto j = ReadJson(Path(artifact::kVerification));
  if (!j.ok()) return j.status();
  std::vector<JudgeVerdict> out;
  try {
    for (auto const& e : *j) {
      JudgeVerdict v;
      v.judge = e.at("judge").get<std::string>();
      v.accepted = e.at("accepted").get<bool>();
      v.reason = e.value("reason", "");
      v.report.accepted = v.accepted;
      out.push_back(std::move(v));
    }
  } catch (Json::exception const& e) {
    return absl::DataLossError(absl::StrCat("verification.json: ", e.what()));
  }
  return out;
}

absl::Status Pipeline::Merge() {
  auto ingest = LoadIngestArtifacts(config_.work_dir);
  if (!ingest.ok()) return ingest.status();
  auto verdicts = LoadVerification();
  if (!verdicts.ok()) return verdicts.status();
  auto text = ReadFile(Path(artifact::kSplits));
  if (!text.ok()) return text.status();
  auto assignments = ParseAssignmentsCsv(*text);
  if (!assignments.ok()) return assignments.status();

  std::map<std::string, std::vector<JudgeOutput>> tables;
  std::vector<std::string> order;
  OJson absent = OJson::object();
  for (auto const& v : *verdicts) {
    if (!v.accepted) {
      absent[v.judge] = v.reason;
      continue;
    }
    CheckpointStore store(CheckpointStore::PathFor(Path(artifact::kCheckpoints), v.judge), v.judge);
    auto table = store.LoadTable();
    if (!table.ok()) return table.status();
    tables[v.judge] = *std::move(table);
    order.push_back(v.judge);
  }
  if (tables.empty()) return absl::FailedPreconditionError("no judge passed verification");
  auto merged = MergePredictions(tables, ingest->attempts, AssignmentMap(*assignments));
  if (!merged.ok()) return merged.status();
  if (auto s = WriteText(Path(artifact::kPredictionsLong), LongTableCsv(*merged)); !s.ok()) return s;
  if (auto s = WriteText(Path(artifact::kPredictionsWide), WideTableCsv(*merged)); !s.ok()) return s;
  OJson report;
  report["judges"] = merged->judges;
  report["absent"] = absent;
  report["rows"] = merged->wide_rows.size();
  return WriteText(Path(artifact::kMergeReport), report.dump(2) + "\n");
}

namespace {

struct Loaded {
  IngestResult ingest;
  PredictionTable table;
  std::map<GroupKey, Split> splits;
  std::map<std::string, std::string> absent;
};

absl::StatusOr<Loaded> LoadForAnalysis(Pipeline const& p) {
  Loaded out;
  auto ingest = LoadIngestArtifacts(p.config().work_dir);
  if (!ingest.ok()) return ingest.status();
  out.ingest = *std::move(ingest);
  auto wide = ReadFile(p.Path(artifact::kPredictionsWide));
  if (!wide.ok()) return wide.status();
  auto table = ParseWideTableCsv(*wide);
  if (!table.ok()) return table.status();
  out.table = *std::move(table);
  auto splits = ReadFile(p.Path(artifact::kSplits));
  if (!splits.ok()) return splits.status();
  auto assignments = ParseAssignmentsCsv(*splits);
  if (!assignments.ok()) return assignments.status();
  out.splits = AssignmentMap(*assignments);
  auto merge = ReadJson(p.Path(artifact::kMergeReport));
  if (!merge.ok()) return merge.status();
  for (auto const& [j, reason] : (*merge)["absent"].items()) {
    out.absent[j] = reason.get<std::string>();
  }
  return out;
}

}  // namespace

absl::Status Pipeline::Eval() {
  auto loaded = LoadForAnalysis(*this);
  if (!loaded.ok()) return loaded.status();
  auto const eval = ComputeEvaluation(loaded->table, loaded->absent, config_.ece_bins);
  if (auto s = WriteText(Path(artifact::kJudgeMetrics), JudgeMetricsJson(eval)); !s.ok()) return s;
  return WriteText(Path(artifact::kAgreement), AgreementJson(eval));
}

absl::Status Pipeline::Trajectory() {
  auto loaded = LoadForAnalysis(*this);
  if (!loaded.ok()) return loaded.status();
  auto const block = ComputeTrajectory(loaded->ingest.attempts, loaded->ingest.contexts,
                                       loaded->table, loaded->splits, config_);
  for (auto const& [name, body] : TrajectoryArtifacts(block)) {
    if (auto s = WriteText(Path(name), body); !s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::StatusOr<EvaluationReport> Pipeline::BuildReport() const {
  auto loaded = LoadForAnalysis(*this);
  if (!loaded.ok()) return loaded.status();
  EvaluationReport r;
  r.evaluation = ComputeEvaluation(loaded->table, loaded->absent, config_.ece_bins);
  r.trajectory = ComputeTrajectory(loaded->ingest.attempts, loaded->ingest.contexts, loaded->table,
                                   loaded->splits, config_);
  r.codebleu = config_.codebleu;

  auto& p = r.provenance;
  p.tool_version = std::string(kToolVersion);
  p.config_sha256 = Sha256Hex(CanonicalConfigJson(config_));
  std::string data;
  for (auto const* name : {"attempts.csv", "contexts.json"}) {
    auto body = ReadFile(Path(name));
    if (!body.ok()) return body.status();
    data += *body;
  }
  for (auto const& a : loaded->ingest.attempts) data += a.code;
  p.data_sha256 = Sha256Hex(data);
  std::vector<std::string> hashed = {std::string(artifact::kSplits),
                                     std::string(artifact::kRequests),
                                     std::string(artifact::kVerification),
                                     std::string(artifact::kPredictionsWide),
                                     std::string(artifact::kJudgeMetrics),
                                     std::string(artifact::kAgreement)};
  for (auto const& [name, body] : TrajectoryArtifacts(r.trajectory)) hashed.push_back(name);
  for (auto const& name : hashed) {
    auto body = ReadFile(Path(name));
    if (!body.ok()) {
      return absl::FailedPreconditionError(
          absl::StrCat("missing artifact ", name, "; run the earlier stages first"));
    }
    p.artifacts[name] = Sha256Hex(*body);
  }
  if (!loaded->ingest.attempts.empty()) {
    auto [lo, hi] = std::minmax_element(
        loaded->ingest.attempts.begin(), loaded->ingest.attempts.end(),
        [](auto const& a, auto const& b) { return a.timestamp.epoch_millis < b.timestamp.epoch_millis; });
    p.data_first_timestamp = lo->timestamp.iso;
    p.data_last_timestamp = hi->timestamp.iso;
  }

  if (auto ingest_report = ReadJson(Path("ingest_report.json")); ingest_report.ok()) {
    auto const warnings = (*ingest_report)["warnings"].size();
    if (warnings > 0) p.degraded_flags.push_back(absl::StrCat("ingest: ", warnings, " warnings"));
  }
  if (auto split_report = ReadJson(Path(artifact::kSplitReport)); split_report.ok()) {
    for (auto const& w : (*split_report)["warnings"]) {
      p.degraded_flags.push_back(absl::StrCat("split: ", w.get<std::string>()));
    }
  }
  for (auto const& [j, reason] : r.evaluation.absent) {
    p.degraded_flags.push_back(absl::StrCat("judge ", j, " absent: ", reason));
  }
  for (auto const& m : r.evaluation.metrics) {
    if (m.threshold && m.threshold->degenerate_val) {
      p.degraded_flags.push_back(absl::StrCat("judge ", m.judge, ": single-class VAL split, t* = 0.5"));
    }
  }
  std::size_t degraded_pairs = 0;
  for (auto const& c : r.trajectory.churn) degraded_pairs += c.degraded;
  for (auto const& c : r.trajectory.convergence) degraded_pairs += c.degraded;
  if (degraded_pairs > 0) {
    p.degraded_flags.push_back(
        absl::StrCat("codebleu: ", degraded_pairs, " comparisons without a grammar"));
  }
  if (r.trajectory.prompt_map && r.trajectory.prompt_map->fallback) {
    p.degraded_flags.push_back("prompt_map: fewer than 5 participants, principal axes used");
  }
  return r;
}

absl::Status Pipeline::Report() {
  auto report = BuildReport();
  if (!report.ok()) return report.status();
  if (auto s = WriteText(Path(artifact::kReport), ReportToJson(*report)); !s.ok()) return s;
  return EmitPlotData(*report, Path(artifact::kPlots));
}

}  // namespace cojudge
