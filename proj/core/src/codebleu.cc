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

#include "cojudge/codebleu.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "absl/strings/str_cat.h"
#include "cojudge/text.h"

namespace cojudge {
namespace {

using Weigher = double (*)(std::span<CodeToken const>, double);

double UnitWeight(std::span<CodeToken const>, double) { return 1.0; }

double MeanWeight(std::span<CodeToken const> gram, double keyword_weight) {
  double sum = 0;
  for (auto const& t : gram) sum += t.is_keyword ? keyword_weight : 1.0;
  return sum / static_cast<double>(gram.size());
}

std::string GramKey(std::span<CodeToken const> gram) {
  std::string key;
  for (auto const& t : gram) {
    key += t.text;
    key += '\x1f';
  }
  return key;
}

double Bleu(std::span<CodeToken const> cand, std::span<CodeToken const> ref, int max_n,
            double keyword_weight, Weigher weigh) {
  if (cand.empty()) return 0.0;
  auto const top = std::min<std::size_t>(static_cast<std::size_t>(std::max(max_n, 1)), cand.size());
  double log_sum = 0;
  for (std::size_t n = 1; n <= top; ++n) {
    struct Entry {
      double weight = 0;
      std::size_t count = 0;
    };
    std::map<std::string, Entry> cand_grams;
    std::map<std::string, std::size_t> ref_grams;
    for (std::size_t i = 0; i + n <= cand.size(); ++i) {
      auto gram = cand.subspan(i, n);
      auto& e = cand_grams[GramKey(gram)];
      e.weight = weigh(gram, keyword_weight);
      ++e.count;
    }
    for (std::size_t i = 0; i + n <= ref.size(); ++i) ++ref_grams[GramKey(ref.subspan(i, n))];
    double matched = 0;
    double total = 0;
    for (auto const& [key, e] : cand_grams) {
      auto it = ref_grams.find(key);
      std::size_t const clip = it == ref_grams.end() ? 0 : std::min(e.count, it->second);
      matched += e.weight * static_cast<double>(clip);
      total += e.weight * static_cast<double>(e.count);
    }
    double const precision = matched > 0 ? matched / total : kNgramSmoothing;
    log_sum += std::log(precision);
  }
  double score = std::exp(log_sum / static_cast<double>(top));
  if (cand.size() < ref.size()) {
    score *= std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(cand.size()));
  }
  return score;
}

}  // namespace

absl::Status CodeBleuConfig::Validate() const {
  double sum = 0;
  for (double w : weights) {
    if (!(w >= 0)) return absl::InvalidArgumentError("codebleu weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(absl::StrCat("codebleu weights sum to ", sum, ", not 1"));
  }
  if (weights[3] != 0.0) {
    return absl::InvalidArgumentError("the data-flow component is not computed; its weight must be 0");
  }
  if (max_ngram < 1) return absl::InvalidArgumentError("max_ngram must be >= 1");
  if (!(keyword_weight > 0)) return absl::InvalidArgumentError("keyword_weight must be > 0");
  return absl::OkStatus();
}

std::optional<Grammar> CodeBleuConfig::GrammarFor(std::string_view language) const {
  auto it = grammar_overrides.find(ToLower(Trim(language)));
  if (it != grammar_overrides.end()) return it->second;
  return GrammarForLanguage(language);
}

double NgramMatch(std::span<CodeToken const> candidate, std::span<CodeToken const> reference,
                  int max_n) {
  return Bleu(candidate, reference, max_n, 1.0, UnitWeight);
}

double WeightedNgramMatch(std::span<CodeToken const> candidate,
                          std::span<CodeToken const> reference, int max_n,
                          double keyword_weight) {
  return Bleu(candidate, reference, max_n, keyword_weight, MeanWeight);
}

double SyntaxMatch(std::string_view candidate, std::string_view reference, Grammar grammar) {
  auto const ref = InternalSubtrees(ParseSyntaxTree(reference, grammar));
  if (ref.empty()) return 1.0;
  auto const cand_list = InternalSubtrees(ParseSyntaxTree(candidate, grammar));
  std::set<std::string> const cand(cand_list.begin(), cand_list.end());
  std::size_t found = 0;
  for (auto const& s : ref) found += cand.count(s);
  return static_cast<double>(found) / static_cast<double>(ref.size());
}

CodeBleuResult CodeBleu(std::string_view candidate, std::string_view reference,
                        std::string_view language, CodeBleuConfig const& config) {
  CodeBleuResult r;
  r.grammar = config.GrammarFor(language);
  auto const cand = TokenizeCode(candidate, r.grammar);
  auto const ref = TokenizeCode(reference, r.grammar);
  r.fallback_tokens = cand.fallback;
  r.weights = config.weights;
  if (!r.grammar) {
    r.degraded = true;
    r.weights[0] += config.weights[2] / 2;
    r.weights[1] += config.weights[2] / 2;
    r.weights[2] = 0;
  }
  if (cand.tokens.empty() && ref.tokens.empty()) {
    r.both_empty = true;
    r.score = 1.0;
    return r;
  }
  if (cand.tokens.empty()) return r;
  r.ngram = NgramMatch(cand.tokens, ref.tokens, config.max_ngram);
  r.weighted_ngram = WeightedNgramMatch(cand.tokens, ref.tokens, config.max_ngram,
                                        config.keyword_weight);
  r.score = r.weights[0] * r.ngram + r.weights[1] * r.weighted_ngram;
  if (r.grammar) {
    r.syntax = SyntaxMatch(candidate, reference, *r.grammar);
    r.score += r.weights[2] * *r.syntax;
  }
  r.score = std::clamp(r.score, 0.0, 1.0);
  return r;
}

std::vector<CbChurnValue> CbChurn(std::span<Attempt const> trajectory,
                                  CodeBleuConfig const& config) {
  std::vector<CbChurnValue> out;
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    auto const& prev = trajectory[i - 1];
    auto const& cur = trajectory[i];
    auto const cb = CodeBleu(prev.code, cur.code, cur.language, config);
    out.push_back({cur.turn, 1.0 - cb.score, cb.degraded});
  }
  return out;
}

std::vector<ConvergenceRecord> CbConvergence(std::span<Attempt const> trajectory,
                                             CodeBleuConfig const& config) {
  std::vector<ConvergenceRecord> out;
  auto ac = std::find_if(trajectory.begin(), trajectory.end(),
                         [](Attempt const& a) { return a.label == 1; });
  if (ac == trajectory.end()) return out;
  for (auto const& a : trajectory) {
    auto const cb = CodeBleu(ac->code, a.code, a.language, config);
    out.push_back({a.participant, a.problem, a.turn, cb.score, ac->turn, cb.degraded});
  }
  return out;
}

}  // namespace cojudge
