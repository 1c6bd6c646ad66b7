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

#include "cojudge/edit_distance.h"

#include <algorithm>
#include <array>

#include "cojudge/text.h"

namespace cojudge {

std::size_t Levenshtein(std::u32string_view s, std::u32string_view t) {
  while (!s.empty() && !t.empty() && s.front() == t.front()) {
    s.remove_prefix(1);
    t.remove_prefix(1);
  }
  while (!s.empty() && !t.empty() && s.back() == t.back()) {
    s.remove_suffix(1);
    t.remove_suffix(1);
  }
  if (s.size() < t.size()) std::swap(s, t);
  std::array<std::size_t, 64> small;
  std::vector<std::size_t> large;
  std::size_t* row = small.data();
  if (t.size() >= small.size()) {
    large.resize(t.size() + 1);
    row = large.data();
  }
  for (std::size_t j = 0; j <= t.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= t.size(); ++j) {
      std::size_t const up = row[j];
      std::size_t const sub = diag + (s[i - 1] == t[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, sub});
      diag = up;
    }
  }
  return row[t.size()];
}

std::size_t Levenshtein(std::string_view s, std::string_view t) {
  return Levenshtein(DecodeUtf8(s), DecodeUtf8(t));
}

double Ned(std::u32string_view s, std::u32string_view t) {
  auto const denom = std::max<std::size_t>({1, s.size(), t.size()});
  return static_cast<double>(Levenshtein(s, t)) / static_cast<double>(denom);
}

double Ned(std::string_view s, std::string_view t) {
  return Ned(DecodeUtf8(s), DecodeUtf8(t));
}

std::vector<TurnValue> ConsecutiveChurn(std::span<Attempt const> trajectory,
                                        ChurnField field) {
  std::vector<TurnValue> out;
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    auto const& prev = trajectory[i - 1];
    auto const& cur = trajectory[i];
    double const v = field == ChurnField::kCode ? Ned(prev.code, cur.code)
                                                : Ned(prev.prompt_text, cur.prompt_text);
    out.push_back({cur.turn, v});
  }
  return out;
}

}  // namespace cojudge
