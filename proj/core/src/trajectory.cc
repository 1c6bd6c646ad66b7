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

#include "cojudge/trajectory.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "cojudge/edit_distance.h"

namespace cojudge {

std::vector<TrajectoryPoint> MeanConfidence(PredictionTable const& wide) {
  std::vector<TrajectoryPoint> out;
  out.reserve(wide.wide_rows.size());
  for (auto const& r : wide.wide_rows) {
    double sum = 0;
    for (auto const& s : r.scores) sum += s.p_ac;
    double const p_bar = r.scores.empty() ? 0.0 : sum / static_cast<double>(r.scores.size());
    out.push_back({r.participant, r.problem, r.turn, p_bar, std::nullopt});
  }
  std::stable_sort(out.begin(), out.end(), [](auto const& a, auto const& b) {
    return std::tie(a.participant, a.problem, a.turn) < std::tie(b.participant, b.problem, b.turn);
  });
  for (std::size_t i = 1; i < out.size(); ++i) {
    auto const& prev = out[i - 1];
    auto& cur = out[i];
    if (prev.participant == cur.participant && prev.problem == cur.problem) {
      cur.delta_p_bar = cur.p_bar - prev.p_bar;
    }
  }
  return out;
}

bool TrajectoryOutcome::event() const {
  auto const* t = std::get_if<int>(&first_success);
  return t != nullptr && *t <= horizon;
}

int TrajectoryOutcome::observed_time() const {
  auto const* t = std::get_if<int>(&first_success);
  return t == nullptr ? horizon : std::min(*t, horizon);
}

TrajectoryOutcome MakeOutcome(std::string participant, std::string problem,
                              FirstSuccess first_success, int horizon) {
  return {std::move(participant), std::move(problem), first_success, horizon};
}

std::vector<TrajectoryOutcome> OutcomesFromAttempts(std::span<Attempt const> table) {
  std::map<std::pair<std::string, std::string>, TrajectoryOutcome> groups;
  for (auto const& a : table) {
    auto [it, inserted] = groups.try_emplace({a.participant, a.problem});
    auto& o = it->second;
    if (inserted) {
      o.participant = a.participant;
      o.problem = a.problem;
    }
    o.horizon = std::max(o.horizon, a.turn);
    if (a.label == 1) {
      auto const* t = std::get_if<int>(&o.first_success);
      if (t == nullptr || a.turn < *t) o.first_success = a.turn;
    }
  }
  std::vector<TrajectoryOutcome> out;
  out.reserve(groups.size());
  for (auto& [key, o] : groups) out.push_back(std::move(o));
  return out;
}

std::vector<SuccessPoint> SuccessAtTurn(std::span<TrajectoryOutcome const> outcomes,
                                        int k_max) {
  std::vector<SuccessPoint> out;
  if (outcomes.empty()) return out;
  auto const n = static_cast<std::int64_t>(outcomes.size());
  for (int k = 1; k <= k_max; ++k) {
    std::int64_t solved = 0;
    for (auto const& o : outcomes) {
      auto const* t = std::get_if<int>(&o.first_success);
      if (t != nullptr && *t <= k) ++solved;
    }
    Rational exact(solved, n);
    out.push_back({k, static_cast<double>(solved) / static_cast<double>(n), exact});
  }
  return out;
}

std::vector<SurvivalPoint> KaplanMeier(std::span<TrajectoryOutcome const> outcomes) {
  std::map<int, std::pair<std::int64_t, std::int64_t>> by_time;  // events, censored
  for (auto const& o : outcomes) {
    auto& slot = by_time[o.observed_time()];
    (o.event() ? slot.first : slot.second) += 1;
  }
  std::vector<SurvivalPoint> out;
  auto at_risk = static_cast<std::int64_t>(outcomes.size());
  Rational s = 1;
  for (auto const& [t, counts] : by_time) {
    auto const [d, c] = counts;
    if (d > 0) s *= Rational(at_risk - d, at_risk);
    out.push_back({t, at_risk, d, c, s.convert_to<double>(), s});
    at_risk -= d + c;
  }
  return out;
}

std::map<std::string, double> SolvedRate(std::span<Attempt const> table) {
  std::map<std::string, std::set<std::string>> attempted, solved;
  for (auto const& a : table) {
    attempted[a.participant].insert(a.problem);
    if (a.label == 1) solved[a.participant].insert(a.problem);
  }
  std::map<std::string, double> out;
  for (auto const& [u, problems] : attempted) {
    auto it = solved.find(u);
    std::size_t const s = it == solved.end() ? 0 : it->second.size();
    out[u] = static_cast<double>(s) / static_cast<double>(problems.size());
  }
  return out;
}

absl::StatusOr<TfidfResult> TfidfEmbed(std::map<std::string, std::string> const& docs) {
  std::map<std::string, std::map<std::string, double>> tf;
  std::map<std::string, std::size_t> df;
  for (auto const& [u, text] : docs) {
    auto& counts = tf[u];
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      auto const start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      if (i == start) continue;
      std::string tok = text.substr(start, i - start);
      for (auto& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      counts[tok] += 1;
    }
    for (auto const& [tok, c] : counts) ++df[tok];
  }
  if (df.empty()) return absl::InvalidArgumentError("EmptyCorpus: no tokens in any context");
  TfidfResult r;
  std::map<std::string, std::size_t> index;
  for (auto const& [tok, count] : df) {
    index[tok] = r.vocabulary.size();
    r.vocabulary.push_back(tok);
  }
  auto const n = static_cast<double>(docs.size());
  for (auto const& [u, counts] : tf) {
    std::vector<double> v(r.vocabulary.size(), 0.0);
    double norm = 0;
    for (auto const& [tok, c] : counts) {
      double const idf = std::log((1 + n) / (1 + static_cast<double>(df[tok]))) + 1;
      double const w = c * idf;
      v[index[tok]] = w;
      norm += w * w;
    }
    if (norm > 0) {
      norm = std::sqrt(norm);
      for (auto& x : v) x /= norm;
    }
    r.vectors[u] = std::move(v);
  }
  return r;
}

NedSummary SummarizeNed(std::span<double const> values) {
  NedSummary s;
  s.histogram.assign(10, 0);
  s.n = values.size();
  if (values.empty()) return s;
  double sum = 0;
  for (double v : values) {
    sum += v;
    auto const bin = std::min<std::size_t>(9, static_cast<std::size_t>(v * 10));
    ++s.histogram[bin];
  }
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

NedSummary PromptCodeNed(std::span<Attempt const> table,
                         std::map<GroupKey, Split> const& splits, Split split) {
  std::vector<double> values;
  for (auto const& a : table) {
    auto it = splits.find(GroupKey{a.participant, a.problem});
    if (it == splits.end() || it->second != split) continue;
    values.push_back(Ned(a.prompt_text, a.code));
  }
  return SummarizeNed(values);
}

}  // namespace cojudge
