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

#include <algorithm>
#include <cmath>
#include <ctime>
#include <random>
#include <set>
#include <thread>

#include "absl/strings/str_cat.h"
#include "cojudge/io.h"
#include "cojudge/text.h"
#include "nlohmann/json.hpp"

namespace cojudge {

namespace fs = std::filesystem;

namespace {

bool IsClean(JudgeOutput const& o) { return o.ok() && o.p_ac.has_value(); }

}  // namespace

CheckpointStore::CheckpointStore(fs::path path, std::string judge)
    : path_(std::move(path)), judge_(std::move(judge)) {}

fs::path CheckpointStore::PathFor(fs::path const& dir, std::string const& judge) {
  return dir / absl::StrCat("judge_", judge, ".jsonl");
}

std::string JudgeOutputToJsonLine(JudgeOutput const& out) {
  nlohmann::ordered_json j;
  j["attempt_id"] = out.attempt_id;
  j["p_ac"] = out.p_ac ? nlohmann::ordered_json(*out.p_ac) : nlohmann::ordered_json(nullptr);
  j["s_algo"] = out.s_algo ? nlohmann::ordered_json(*out.s_algo) : nlohmann::ordered_json(nullptr);
  j["s_robust"] = out.s_robust ? nlohmann::ordered_json(*out.s_robust) : nlohmann::ordered_json(nullptr);
  j["rationale"] = out.rationale;
  j["error"] = out.error ? nlohmann::ordered_json(*out.error) : nlohmann::ordered_json(nullptr);
  j["raw_response"] = out.raw_response;
  j["received_at"] = out.received_at;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

absl::StatusOr<std::map<std::string, JudgeOutput>> CheckpointStore::Load() const {
  std::map<std::string, JudgeOutput> records;
  std::error_code ec;
  if (!fs::exists(path_, ec)) return records;
  auto text = ReadFile(path_);
  if (!text.ok()) return text.status();
  int line_no = 0;
  for (auto const& line : SplitLines(*text)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto corrupt = [&](std::string_view why) {
      return absl::DataLossError(absl::StrCat("CheckpointCorrupt: ", path_.string(),
                                              " line ", line_no, ": ", std::string(why)));
    };
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return corrupt("not a JSON object");
    JudgeOutput o;
    o.judge = judge_;
    try {
      o.attempt_id = j.at("attempt_id").get<std::string>();
      if (auto const& p = j.at("p_ac"); !p.is_null()) o.p_ac = p.get<double>();
      if (auto const& s = j.at("s_algo"); !s.is_null()) o.s_algo = s.get<int>();
      if (auto const& s = j.at("s_robust"); !s.is_null()) o.s_robust = s.get<int>();
      o.rationale = j.value("rationale", "");
      if (auto const& e = j.at("error"); !e.is_null()) o.error = e.get<std::string>();
      o.raw_response = j.value("raw_response", "");
      o.received_at = j.value("received_at", "");
    } catch (nlohmann::json::exception const& e) {
      return corrupt(e.what());
    }
    if (o.attempt_id.empty()) return corrupt("empty attempt_id");
    records[o.attempt_id] = std::move(o);
  }
  return records;
}

absl::StatusOr<std::vector<JudgeOutput>> CheckpointStore::LoadTable() const {
  auto records = Load();
  if (!records.ok()) return records.status();
  std::vector<JudgeOutput> table;
  table.reserve(records->size());
  for (auto& [id, o] : *records) table.push_back(std::move(o));
  return table;
}

absl::Status CheckpointStore::Append(std::span<JudgeOutput const> records) {
  if (records.empty()) return absl::OkStatus();
  std::string chunk;
  for (auto const& r : records) {
    chunk += JudgeOutputToJsonLine(r);
    chunk.push_back('\n');
  }
  // One write per flush keeps each batch contiguous in the log.
  return AppendFile(path_, chunk);
}

void RealSleep(std::chrono::duration<double> d) {
  if (d.count() > 0) std::this_thread::sleep_for(d);
}

std::string UtcNow() {
  auto const now = std::chrono::system_clock::now();
  std::time_t const t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

absl::StatusOr<InferenceStats> RunInference(JudgeAdapter& adapter,
                                            std::span<JudgeRequest const> requests,
                                            CheckpointStore& store,
                                            InferenceOptions const& options) {
  auto existing = store.Load();
  if (!existing.ok()) return existing.status();
  InferenceStats stats;
  int const save_every = std::max(1, options.save_every);
  std::vector<JudgeOutput> pending;
  auto flush = [&]() -> absl::Status {
    if (pending.empty()) return absl::OkStatus();
    if (auto s = store.Append(pending); !s.ok()) return s;
    pending.clear();
    ++stats.flushes;
    if (options.on_flush && !options.on_flush(stats.flushes)) stats.interrupted = true;
    return absl::OkStatus();
  };
  bool first_call = true;
  for (auto const& request : requests) {
    auto it = existing->find(request.attempt_id);
    if (it != existing->end() && IsClean(it->second)) {
      ++stats.skipped;
      continue;
    }
    if (!first_call && adapter.remote()) {
      options.sleep(std::chrono::duration<double>(options.sleep_seconds));
    }
    first_call = false;
    auto out = AdapterInfer(adapter, request);
    out.received_at = options.clock ? options.clock() : std::string();
    ++stats.calls;
    pending.push_back(std::move(out));
    if (static_cast<int>(pending.size()) >= save_every) {
      if (auto s = flush(); !s.ok()) return s;
      if (stats.interrupted) return stats;
    }
  }
  if (auto s = flush(); !s.ok()) return s;
  return stats;
}

std::chrono::duration<double> BackoffPolicy::Delay(int pass, double unit) const {
  double const raw = base_seconds * std::pow(factor, std::max(0, pass - 1));
  double const capped = std::min(cap_seconds, raw);
  double const jittered = capped * (1.0 + jitter * (2.0 * unit - 1.0));
  return std::chrono::duration<double>(std::max(0.0, jittered));
}

absl::StatusOr<RetryOutcome> RetryFailed(JudgeAdapter& adapter,
                                         std::span<JudgeRequest const> requests,
                                         CheckpointStore& store,
                                         RetryOptions const& options) {
  std::map<std::string, JudgeRequest const*> by_id;
  for (auto const& r : requests) by_id[r.attempt_id] = &r;
  std::mt19937_64 rng(options.backoff.seed);
  RetryOutcome outcome;
  for (int pass = 1; pass <= options.max_retries; ++pass) {
    auto records = store.Load();
    if (!records.ok()) return records.status();
    std::vector<JudgeRequest const*> failed;
    for (auto const& [id, rec] : *records) {
      if (!rec.ok() && by_id.count(id)) failed.push_back(by_id[id]);
    }
    if (failed.empty()) break;
    ++outcome.passes;
    double const unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (adapter.remote()) options.sleep(options.backoff.Delay(pass, unit));
    std::vector<JudgeOutput> results;
    for (std::size_t i = 0; i < failed.size(); ++i) {
      if (i > 0 && adapter.remote()) {
        options.sleep(std::chrono::duration<double>(options.sleep_seconds));
      }
      auto out = AdapterInfer(adapter, *failed[i]);
      out.received_at = options.clock ? options.clock() : std::string();
      ++outcome.calls;
      results.push_back(std::move(out));
    }
    if (auto s = store.Append(results); !s.ok()) return s;
  }
  auto table = store.LoadTable();
  if (!table.ok()) return table.status();
  outcome.table = *std::move(table);
  for (auto const& o : outcome.table) {
    if (!o.ok() && by_id.count(o.attempt_id)) outcome.exhausted_ids.push_back(o.attempt_id);
  }
  return outcome;
}

std::string_view ConditionName(VerifyCondition c) {
  switch (c) {
    case VerifyCondition::kCount:
      return "count";
    case VerifyCondition::kUniq:
      return "uniq";
    case VerifyCondition::kMissing:
      return "missing";
    case VerifyCondition::kRange:
      return "range";
    case VerifyCondition::kError:
      return "error";
  }
  return "count";
}

bool VerificationReport::Violates(VerifyCondition c) const {
  return std::any_of(violations.begin(), violations.end(),
                     [c](auto const& v) { return v.condition == c; });
}

VerificationReport VerifyOutputs(std::span<JudgeOutput const> table,
                                 std::span<Attempt const> attempts) {
  VerificationReport report;
  std::set<std::string> expected;
  for (auto const& a : attempts) expected.insert(a.attempt_id);

  if (table.size() != attempts.size()) {
    report.violations.push_back(
        {VerifyCondition::kCount, {},
         absl::StrCat("|O| = ", table.size(), ", |A| = ", attempts.size())});
  }

  std::map<std::string, int> seen;
  for (auto const& o : table) ++seen[o.attempt_id];
  std::vector<std::string> uniq_ids;
  for (auto const& [id, n] : seen) {
    if (n > 1 || !expected.count(id)) uniq_ids.push_back(id);  // duplicate / unknown
  }
  for (auto const& id : expected) {
    if (!seen.count(id)) uniq_ids.push_back(id);  // not covered
  }
  if (!uniq_ids.empty()) {
    std::size_t covered = 0;
    for (auto const& id : expected) covered += seen.count(id);
    report.violations.push_back(
        {VerifyCondition::kUniq, uniq_ids,
         absl::StrCat("|uniq(ids)| = ", seen.size(), ", covering ", covered,
                      " of ", expected.size(), " attempts")});
  }

  std::vector<std::string> missing, range, error;
  for (auto const& o : table) {
    if (!o.p_ac) {
      missing.push_back(o.attempt_id);
    } else if (!(*o.p_ac >= 0.0 && *o.p_ac <= 1.0)) {
      range.push_back(o.attempt_id);
    }
    if (o.error) error.push_back(o.attempt_id);
  }
  if (!missing.empty()) {
    report.violations.push_back({VerifyCondition::kMissing, missing,
                                 absl::StrCat(missing.size(), " missing p_ac")});
  }
  if (!range.empty()) {
    report.violations.push_back({VerifyCondition::kRange, range,
                                 absl::StrCat(range.size(), " p_ac outside [0,1]")});
  }
  if (!error.empty()) {
    report.violations.push_back({VerifyCondition::kError, error,
                                 absl::StrCat(error.size(), " error records")});
  }
  report.accepted = report.violations.empty();
  return report;
}

absl::StatusOr<PredictionTable> MergePredictions(
    std::map<std::string, std::vector<JudgeOutput>> const& tables,
    std::span<Attempt const> attempts, std::map<GroupKey, Split> const& splits) {
  PredictionTable merged;
  std::vector<std::map<std::string, JudgeOutput const*>> index;
  for (auto const& [judge, table] : tables) {
    if (!VerifyOutputs(table, attempts).accepted) {
      return absl::FailedPreconditionError(absl::StrCat("UnverifiedInput(", judge, ")"));
    }
    merged.judges.push_back(judge);
    auto& idx = index.emplace_back();
    for (auto const& o : table) idx[o.attempt_id] = &o;
  }
  for (auto const& a : attempts) {
    auto it = splits.find(GroupKey{a.participant, a.problem});
    if (it == splits.end()) {
      return absl::NotFoundError(
          absl::StrCat("UncoveredGroup(", a.participant, ":", a.problem, ")"));
    }
    WideRow wide{a.attempt_id, a.participant, a.problem, a.turn, it->second, a.label, {}};
    for (std::size_t j = 0; j < merged.judges.size(); ++j) {
      auto const& o = *index[j].at(a.attempt_id);
      JudgeScores s{*o.p_ac, o.s_algo.value_or(0), o.s_robust.value_or(0)};
      wide.scores.push_back(s);
      merged.long_rows.push_back({a.attempt_id, a.participant, a.problem, a.turn,
                                  it->second, a.label, merged.judges[j], s});
    }
    merged.wide_rows.push_back(std::move(wide));
  }
  // Long form groups rows by judge.
  std::stable_sort(merged.long_rows.begin(), merged.long_rows.end(),
                   [&](LongRow const& x, LongRow const& y) { return x.judge < y.judge; });
  return merged;
}

std::string LongTableCsv(PredictionTable const& table) {
  std::string out = CsvRow({"attempt_id", "participant", "problem", "turn", "split",
                            "label", "judge", "p_ac", "s_algo", "s_robust"});
  for (auto const& r : table.long_rows) {
    out += CsvRow({r.attempt_id, r.participant, r.problem, std::to_string(r.turn),
                   std::string(SplitName(r.split)), std::to_string(r.label), r.judge,
                   FormatDouble(r.scores.p_ac), std::to_string(r.scores.s_algo),
                   std::to_string(r.scores.s_robust)});
  }
  return out;
}

std::string WideTableCsv(PredictionTable const& table) {
  std::vector<std::string> header = {"attempt_id", "participant", "problem",
                                     "turn",       "split",       "label"};
  for (auto const& j : table.judges) {
    header.push_back(j + "_p_ac");
    header.push_back(j + "_s_algo");
    header.push_back(j + "_s_robust");
  }
  std::string out = CsvRow(header);
  for (auto const& r : table.wide_rows) {
    std::vector<std::string> row = {r.attempt_id, r.participant, r.problem,
                                    std::to_string(r.turn),
                                    std::string(SplitName(r.split)),
                                    std::to_string(r.label)};
    for (auto const& s : r.scores) {
      row.push_back(FormatDouble(s.p_ac));
      row.push_back(std::to_string(s.s_algo));
      row.push_back(std::to_string(s.s_robust));
    }
    out += CsvRow(row);
  }
  return out;
}

absl::StatusOr<PredictionTable> ParseWideTableCsv(std::string_view text) {
  auto csv = ParseCsv(text);
  if (!csv.ok()) return csv.status();
  auto const& h = csv->header;
  if (h.size() < 6 || (h.size() - 6) % 3 != 0 || h[0] != "attempt_id") {
    return absl::DataLossError("predictions_wide.csv has an unexpected header");
  }
  PredictionTable table;
  for (std::size_t c = 6; c < h.size(); c += 3) {
    if (!EndsWith(h[c], "_p_ac")) {
      return absl::DataLossError(absl::StrCat("unexpected column ", h[c]));
    }
    table.judges.push_back(h[c].substr(0, h[c].size() - 5));
  }
  try {
    for (auto const& row : csv->rows) {
      WideRow r;
      r.attempt_id = row[0];
      r.participant = row[1];
      r.problem = row[2];
      r.turn = std::stoi(row[3]);
      auto split = SplitFromName(row[4]);
      if (!split.ok()) return split.status();
      r.split = *split;
      r.label = std::stoi(row[5]);
      for (std::size_t c = 6; c < row.size(); c += 3) {
        r.scores.push_back({std::stod(row[c]), std::stoi(row[c + 1]),
                            std::stoi(row[c + 2])});
      }
      for (std::size_t j = 0; j < table.judges.size(); ++j) {
        table.long_rows.push_back({r.attempt_id, r.participant, r.problem, r.turn,
                                   r.split, r.label, table.judges[j], r.scores[j]});
      }
      table.wide_rows.push_back(std::move(r));
    }
  } catch (std::exception const& e) {
    return absl::DataLossError(absl::StrCat("predictions_wide.csv: ", e.what()));
  }
  std::stable_sort(table.long_rows.begin(), table.long_rows.end(),
                   [](LongRow const& x, LongRow const& y) { return x.judge < y.judge; });
  return table;
}

absl::StatusOr<JudgeRunResult> RunJudge(JudgeAdapter& adapter,
                                        std::span<JudgeRequest const> requests,
                                        std::span<Attempt const> attempts,
                                        CheckpointStore& store,
                                        JudgeRunOptions const& options) {
  JudgeRunResult result;
  result.judge = adapter.spec().name;
  auto stats = RunInference(adapter, requests, store, options.inference);
  if (!stats.ok()) return stats.status();
  result.inference = *stats;
  if (stats->interrupted) return result;
  auto retry = RetryFailed(adapter, requests, store, options.retry);
  if (!retry.ok()) return retry.status();
  result.retry = *std::move(retry);
  result.verification = VerifyOutputs(result.retry.table, attempts);
  return result;
}

}  // namespace cojudge
