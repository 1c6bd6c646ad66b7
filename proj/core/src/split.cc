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

#include "cojudge/split.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "absl/strings/str_cat.h"
#include "cojudge/io.h"
#include "cojudge/text.h"
#include "nlohmann/json.hpp"

namespace cojudge {
namespace {

std::uint64_t UniformBelow(std::mt19937_64& rng, std::uint64_t n) {
  // Rejection sampling keeps the draw unbiased and independent of the
  // standard library's distribution implementation.
  std::uint64_t const limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

template <typename T>
void Shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[UniformBelow(rng, i)]);
  }
}

// Largest-remainder apportionment of `total` across `weights`.
std::vector<std::size_t> Apportion(std::size_t total,
                                   std::vector<std::size_t> const& weights) {
  std::size_t const sum = std::accumulate(weights.begin(), weights.end(),
                                          std::size_t{0});
  std::vector<std::size_t> out(weights.size(), 0);
  if (sum == 0 || total == 0) return out;
  std::vector<std::pair<std::size_t, std::size_t>> remainders;  // (rem, idx)
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    std::size_t const num = total * weights[i];
    out[i] = num / sum;
    assigned += out[i];
    remainders.emplace_back(num % sum, i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](auto const& a, auto const& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total && k < remainders.size(); ++k) {
    ++out[remainders[k].second];
    ++assigned;
  }
  return out;
}

}  // namespace

std::string_view SplitName(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
  }
  return "train";
}

absl::StatusOr<Split> SplitFromName(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  return absl::InvalidArgumentError(absl::StrCat("unknown split '", std::string(name), "'"));
}

absl::Status SplitConfig::Validate() const {
  double sum = 0;
  for (double r : ratios) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      return absl::InvalidArgumentError("split ratios must be non-negative");
    }
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(
        absl::StrCat("split ratios sum to ", sum, ", expected 1"));
  }
  return absl::OkStatus();
}

std::array<std::size_t, 3> SplitSizes(std::size_t n,
                                      std::array<double, 3> const& ratios) {
  auto const nd = static_cast<double>(n);
  auto val = static_cast<std::size_t>(std::round(ratios[1] * nd));
  auto test = static_cast<std::size_t>(std::round(ratios[2] * nd));
  val = std::min(val, n);
  test = std::min(test, n - val);
  return {n - val - test, val, test};
}

absl::StatusOr<GroupSplitResult> GroupSplit(std::span<LabeledGroup const> groups,
                                            SplitConfig const& config) {
  if (auto s = config.Validate(); !s.ok()) return s;
  if (groups.empty()) return absl::InvalidArgumentError("no groups to split");

  std::vector<LabeledGroup> sorted(groups.begin(), groups.end());
  std::sort(sorted.begin(), sorted.end(),
            [](auto const& a, auto const& b) { return a.group < b.group; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].group == sorted[i - 1].group) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate group ", sorted[i].group.participant, ":",
                       sorted[i].group.problem));
    }
  }

  auto const targets = SplitSizes(sorted.size(), config.ratios);
  std::mt19937_64 rng(config.seed);
  GroupSplitResult result;

  // strata[label] = groups; a single stratum when not stratifying.
  std::map<int, std::vector<GroupKey>> strata;
  for (auto const& g : sorted) strata[config.stratify ? g.label : 0].push_back(g.group);

  auto const nonzero = static_cast<std::size_t>(
      std::count_if(config.ratios.begin(), config.ratios.end(),
                    [](double r) { return r > 0; }));
  std::vector<std::vector<GroupKey>*> eligible;
  std::vector<std::size_t> sizes;
  for (auto& [label, members] : strata) {
    if (config.stratify && members.size() < nonzero) {
      result.warnings.push_back(absl::StrCat(
          "InsufficientGroups: stratum label=", label, " has ", members.size(),
          " groups for ", nonzero, " splits; assigned to train"));
      for (auto const& g : members) result.assignments.push_back({g, Split::kTrain});
      continue;
    }
    eligible.push_back(&members);
    sizes.push_back(members.size());
  }

  std::size_t const eligible_total =
      std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  std::size_t const val_total = std::min(targets[1], eligible_total);
  std::size_t const test_total = std::min(targets[2], eligible_total - val_total);
  auto val_quota = Apportion(val_total, sizes);
  auto test_quota = Apportion(test_total, sizes);

  for (std::size_t s = 0; s < eligible.size(); ++s) {
    auto members = *eligible[s];
    Shuffle(members, rng);
    std::size_t const nv = std::min(val_quota[s], members.size());
    std::size_t const nt = std::min(test_quota[s], members.size() - nv);
    for (std::size_t i = 0; i < members.size(); ++i) {
      Split const split = i < nv ? Split::kVal : i < nv + nt ? Split::kTest : Split::kTrain;
      result.assignments.push_back({members[i], split});
    }
  }
  std::sort(result.assignments.begin(), result.assignments.end(),
            [](auto const& a, auto const& b) { return a.group < b.group; });
  return result;
}

std::vector<LabeledGroup> GroupsFromAttempts(std::span<Attempt const> table) {
  std::map<GroupKey, int> solved;
  for (auto const& a : table) {
    auto& s = solved[GroupKey{a.participant, a.problem}];
    s = std::max(s, a.label);
  }
  std::vector<LabeledGroup> out;
  out.reserve(solved.size());
  for (auto const& [g, label] : solved) out.push_back({g, label});
  return out;
}

std::map<GroupKey, Split> AssignmentMap(std::span<SplitAssignment const> a) {
  std::map<GroupKey, Split> out;
  for (auto const& x : a) out[x.group] = x.split;
  return out;
}

absl::StatusOr<std::vector<JudgeRequest>> SerializeRequests(
    std::span<Attempt const> table, std::span<SplitAssignment const> assignment,
    std::size_t max_code, std::size_t max_prompt) {
  auto const splits = AssignmentMap(assignment);
  std::vector<JudgeRequest> out;
  out.reserve(table.size());
  for (auto const& a : table) {
    auto it = splits.find(GroupKey{a.participant, a.problem});
    if (it == splits.end()) {
      return absl::NotFoundError(
          absl::StrCat("UncoveredGroup(", a.participant, ":", a.problem, ")"));
    }
    JudgeRequest r;
    r.attempt_id = a.attempt_id;
    r.split = it->second;
    r.problem_id = a.problem;
    r.language = a.language;
    r.source_code = Utf8Prefix(a.code, max_code);
    r.prompt_text = Utf8Prefix(a.prompt_text, max_prompt);
    out.push_back(std::move(r));
  }
  return out;
}

std::string RequestToJsonLine(JudgeRequest const& r) {
  // Field order is fixed by construction; ordered_json keeps insertion order.
  nlohmann::ordered_json j;
  j["attempt_id"] = r.attempt_id;
  j["split"] = std::string(SplitName(r.split));
  j["problem_id"] = r.problem_id;
  j["language"] = r.language;
  j["source_code"] = r.source_code;
  j["prompt_text"] = r.prompt_text;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string RequestsToJsonl(std::span<JudgeRequest const> requests) {
  std::string out;
  for (auto const& r : requests) {
    out += RequestToJsonLine(r);
    out.push_back('\n');
  }
  return out;
}

absl::StatusOr<std::vector<JudgeRequest>> ParseRequestsJsonl(std::string_view text) {
  std::vector<JudgeRequest> out;
  int line_no = 0;
  for (auto const& line : SplitLines(text)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      return absl::DataLossError(absl::StrCat("requests.jsonl line ", line_no,
                                              " is not a JSON object"));
    }
    JudgeRequest r;
    try {
      r.attempt_id = j.at("attempt_id").get<std::string>();
      auto split = SplitFromName(j.at("split").get<std::string>());
      if (!split.ok()) return split.status();
      r.split = *split;
      r.problem_id = j.at("problem_id").get<std::string>();
      r.language = j.at("language").get<std::string>();
      r.source_code = j.at("source_code").get<std::string>();
      r.prompt_text = j.at("prompt_text").get<std::string>();
    } catch (nlohmann::json::exception const& e) {
      return absl::DataLossError(
          absl::StrCat("requests.jsonl line ", line_no, ": ", e.what()));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string AssignmentsToCsv(std::span<SplitAssignment const> assignments) {
  std::string out = CsvRow({"participant", "problem", "split"});
  for (auto const& a : assignments) {
    out += CsvRow({a.group.participant, a.group.problem,
                   std::string(SplitName(a.split))});
  }
  return out;
}

absl::StatusOr<std::vector<SplitAssignment>> ParseAssignmentsCsv(
    std::string_view text) {
  auto table = ParseCsv(text);
  if (!table.ok()) return table.status();
  int const cu = table->Column("participant");
  int const cp = table->Column("problem");
  int const cs = table->Column("split");
  if (cu < 0 || cp < 0 || cs < 0) {
    return absl::DataLossError("splits.csv needs participant, problem, split");
  }
  std::vector<SplitAssignment> out;
  for (auto const& row : table->rows) {
    auto split = SplitFromName(row[cs]);
    if (!split.ok()) return split.status();
    out.push_back({GroupKey{row[cu], row[cp]}, *split});
  }
  return out;
}

}  // namespace cojudge
