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

#ifndef COJUDGE_TRAJECTORY_H_
#define COJUDGE_TRAJECTORY_H_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "absl/status/statusor.h"
#include "cojudge/ingest.h"
#include "cojudge/orchestrator.h"
#include "cojudge/split.h"

namespace cojudge {

using Rational = boost::multiprecision::cpp_rational;

struct TrajectoryPoint {
  std::string participant;
  std::string problem;
  int turn = 0;
  double p_bar = 0;
  std::optional<double> delta_p_bar;  // k >= 2 only
};

// p_bar = mean p_ac over the table's judges per attempt, then turn-wise
// differences within each (u, p) trajectory. Sorted by (u, p, k).
std::vector<TrajectoryPoint> MeanConfidence(PredictionTable const& wide);

// First-success turn T*: a turn index or Never.
struct Never {
  friend bool operator==(Never, Never) { return true; }
};
using FirstSuccess = std::variant<int, Never>;

struct TrajectoryOutcome {
  std::string participant;
  std::string problem;
  FirstSuccess first_success = Never{};
  int horizon = 0;  // K, the last observed turn

  bool event() const;         // T* <= K
  int observed_time() const;  // min(T*, K)
};

TrajectoryOutcome MakeOutcome(std::string participant, std::string problem,
                              FirstSuccess first_success, int horizon);

// One outcome per (u, p) group of the attempt table, sorted by group.
std::vector<TrajectoryOutcome> OutcomesFromAttempts(std::span<Attempt const> table);

struct SuccessPoint {
  int turn = 0;
  double value = 0;
  Rational exact;
};

// S(k) = fraction of outcomes with T* <= k, for k = 1..k_max.
std::vector<SuccessPoint> SuccessAtTurn(std::span<TrajectoryOutcome const> outcomes,
                                        int k_max);

struct SurvivalPoint {
  int time = 0;
  std::int64_t at_risk = 0;
  std::int64_t events = 0;
  std::int64_t censored = 0;
  double survival = 1;
  Rational exact;
};

// Product-limit estimate at every distinct observed time, events processed
// before censorings at tied times. Computed in exact rationals.
std::vector<SurvivalPoint> KaplanMeier(std::span<TrajectoryOutcome const> outcomes);

// Fraction of attempted problems with at least one accepted attempt.
std::map<std::string, double> SolvedRate(std::span<Attempt const> table);

struct TfidfResult {
  std::vector<std::string> vocabulary;  // sorted
  std::map<std::string, std::vector<double>> vectors;
};

// Raw term frequency, idf = ln((1+N)/(1+df)) + 1, L2-normalized rows;
// tokens are whitespace-delimited and lowercased. InvalidArgument
// "EmptyCorpus" when no document has a token.
absl::StatusOr<TfidfResult> TfidfEmbed(std::map<std::string, std::string> const& docs);

struct TsneOptions {
  int iterations = 1000;
  double learning_rate = 100.0;
  double early_exaggeration = 12.0;
  int exaggeration_iterations = 100;
  std::optional<double> perplexity;  // default min(5, (n-1)/3)
};

struct Projection {
  std::map<std::string, std::array<double, 2>> coords;
  bool fallback = false;  // principal axes instead of t-SNE
  std::string method;
  double perplexity = 0;
};

// Exact t-SNE to 2-D, initialized from the principal-axes projection. With
// fewer than 5 points returns that projection with `fallback` set.
Projection TsneProject(std::map<std::string, std::vector<double>> const& vectors,
                       std::uint64_t seed, TsneOptions const& options = {});

// First two principal-axis scores of the rows (zero-filled when rank < 2).
std::vector<std::array<double, 2>> PrincipalAxes(std::vector<std::vector<double>> const& rows);

struct PromptMapPoint {
  std::string participant;
  std::array<double, 2> z{};
  double solved_rate = 0;
};

struct NedSummary {
  double mean = 0;
  double std = 0;  // sample (n - 1) standard deviation
  std::size_t n = 0;
  std::vector<std::size_t> histogram;  // 10 equal-width bins on [0, 1]
};

NedSummary SummarizeNed(std::span<double const> values);

// NED(prompt_text, code) over the attempts whose (u, p) group is in `split`.
NedSummary PromptCodeNed(std::span<Attempt const> table,
                         std::map<GroupKey, Split> const& splits, Split split);

}  // namespace cojudge

#endif  // COJUDGE_TRAJECTORY_H_
