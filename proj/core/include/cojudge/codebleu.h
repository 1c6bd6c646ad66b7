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

#ifndef COJUDGE_CODEBLEU_H_
#define COJUDGE_CODEBLEU_H_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "cojudge/code_lexer.h"
#include "cojudge/edit_distance.h"
#include "cojudge/ingest.h"

namespace cojudge {

inline constexpr double kNgramSmoothing = 1e-16;

struct CodeBleuConfig {
  // (ngram, weighted ngram, syntax, dataflow). Data-flow is never computed,
  // so its weight must stay 0.
  std::array<double, 4> weights = {1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0};
  int max_ngram = 4;
  double keyword_weight = 5.0;
  // Language token (lowercased) -> profile; consulted before the built-in
  // mapping. An empty optional forces the no-grammar fallback.
  std::map<std::string, std::optional<Grammar>> grammar_overrides;

  absl::Status Validate() const;
  std::optional<Grammar> GrammarFor(std::string_view language) const;
};

// BLEU-style clipped n-gram precision for n = 1..min(max_n, |candidate|),
// zero precisions smoothed to 1e-16, geometric mean, brevity penalty.
// 0 for an empty candidate.
double NgramMatch(std::span<CodeToken const> candidate,
                  std::span<CodeToken const> reference, int max_n);

// Same, with every n-gram counted at the mean weight of its tokens
// (keywords `keyword_weight`, other tokens 1).
double WeightedNgramMatch(std::span<CodeToken const> candidate,
                          std::span<CodeToken const> reference, int max_n,
                          double keyword_weight);

// Fraction of the reference's internal subtrees that occur in the
// candidate; 1 when the reference has none.
double SyntaxMatch(std::string_view candidate, std::string_view reference, Grammar grammar);

struct CodeBleuResult {
  double score = 0;
  double ngram = 0;
  double weighted_ngram = 0;
  std::optional<double> syntax;  // absent without a grammar
  std::array<double, 4> weights{};  // as applied
  std::optional<Grammar> grammar;
  bool degraded = false;    // syntax unavailable, weight redistributed
  bool both_empty = false;  // 1.0 by convention
  bool fallback_tokens = false;
};

CodeBleuResult CodeBleu(std::string_view candidate, std::string_view reference,
                        std::string_view language, CodeBleuConfig const& config = {});

struct CbChurnValue {
  int turn = 0;
  double value = 0;
  bool degraded = false;
};

// 1 - codebleu(c_{k-1}, c_k) for k >= 2 over a turn-sorted trajectory.
std::vector<CbChurnValue> CbChurn(std::span<Attempt const> trajectory,
                                  CodeBleuConfig const& config = {});

struct ConvergenceRecord {
  std::string participant;
  std::string problem;
  int turn = 0;
  double conv_cb = 0;
  int reference_turn = 0;  // turn of the first accepted attempt
  bool degraded = false;
};

// codebleu(c^AC, c_k) for every turn; empty when nothing was accepted.
std::vector<ConvergenceRecord> CbConvergence(std::span<Attempt const> trajectory,
                                             CodeBleuConfig const& config = {});

}  // namespace cojudge

#endif  // COJUDGE_CODEBLEU_H_
