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

#ifndef COJUDGE_EDIT_DISTANCE_H_
#define COJUDGE_EDIT_DISTANCE_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cojudge/ingest.h"

namespace cojudge {

// Unit-cost insert/delete/substitute distance over Unicode code points.
std::size_t Levenshtein(std::u32string_view s, std::u32string_view t);
std::size_t Levenshtein(std::string_view s, std::string_view t);

// LD(s, t) / max(1, |s|, |t|), lengths in code points.
double Ned(std::string_view s, std::string_view t);
double Ned(std::u32string_view s, std::u32string_view t);

enum class ChurnField { kPrompt, kCode };

struct TurnValue {
  int turn = 0;
  double value = 0;

  friend bool operator==(TurnValue const&, TurnValue const&) = default;
};

// NED between consecutive turns of a turn-sorted trajectory, for k >= 2.
std::vector<TurnValue> ConsecutiveChurn(std::span<Attempt const> trajectory,
                                        ChurnField field);

}  // namespace cojudge

#endif  // COJUDGE_EDIT_DISTANCE_H_
