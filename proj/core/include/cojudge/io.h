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

#ifndef COJUDGE_IO_H_
#define COJUDGE_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace cojudge {

absl::StatusOr<std::string> ReadFile(std::filesystem::path const& path);

// Writes via a sibling temp file and rename(2), so readers never observe a
// partially written artifact. Leaves the file untouched (mtime included)
// when the existing content is byte-identical.
absl::Status WriteFileAtomic(std::filesystem::path const& path,
                             std::string_view content);

// Appends and flushes; used by append-only logs.
absl::Status AppendFile(std::filesystem::path const& path,
                        std::string_view content);

std::string Sha256Hex(std::string_view data);

// Stable, platform-independent hashing for seeded derivations.
std::uint64_t Fnv1a64(std::string_view data);
std::uint64_t SplitMix64(std::uint64_t x);

// RFC 4180 CSV.
std::string CsvEscape(std::string_view field);
std::string CsvRow(std::vector<std::string> const& fields);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of `name` in the header, or -1.
  int Column(std::string_view name) const;
};

absl::StatusOr<CsvTable> ParseCsv(std::string_view text);

// Shortest round-trip decimal representation.
std::string FormatDouble(double value);

}  // namespace cojudge

#endif  // COJUDGE_IO_H_
