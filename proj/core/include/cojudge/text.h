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

#ifndef COJUDGE_TEXT_H_
#define COJUDGE_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cojudge {

// Character-level helpers. "Characters" throughout the project are Unicode
// code points of UTF-8 text; malformed bytes decode to U+FFFD.
std::u32string DecodeUtf8(std::string_view text);
std::string EncodeUtf8(std::u32string_view text);
std::size_t Utf8Length(std::string_view text);

// Keeps the first `max_chars` code points.
std::string Utf8Prefix(std::string_view text, std::size_t max_chars);

std::string Trim(std::string_view text);
std::string ToLower(std::string_view text);
bool StartsWith(std::string_view text, std::string_view prefix);
bool EndsWith(std::string_view text, std::string_view suffix);
std::vector<std::string> SplitLines(std::string_view text);
std::vector<std::string> SplitString(std::string_view text, char sep);
std::string Join(std::vector<std::string> const& parts, std::string_view sep);

}  // namespace cojudge

#endif  // COJUDGE_TEXT_H_
