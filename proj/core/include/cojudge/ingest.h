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

#ifndef COJUDGE_INGEST_H_
#define COJUDGE_INGEST_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace cojudge {

inline constexpr std::string_view kDefaultRecordSeparator = "\n-----\n";
inline constexpr std::string_view kAcceptedVerdict = "AC";

enum class ArtifactFormat { kHtml, kHtm, kMarkdown, kText };

// Maps .html/.htm/.md/.txt (case-insensitive) to a format.
absl::StatusOr<ArtifactFormat> FormatFromPath(std::filesystem::path const& p);
std::string_view FormatName(ArtifactFormat format);

struct RawSubmission {
  std::filesystem::path source_path;
  ArtifactFormat format;
  std::string body;

  // Rejects unknown extensions and whitespace-only bodies.
  static absl::StatusOr<RawSubmission> Create(std::filesystem::path path,
                                              std::string body);
  static absl::StatusOr<RawSubmission> Load(std::filesystem::path const& path);
};

// UTC instant with millisecond resolution. `iso` is the normalized
// "YYYY-MM-DDTHH:MM:SS[.mmm]Z" rendering.
struct Timestamp {
  std::int64_t epoch_millis = 0;
  std::string iso;

  friend bool operator==(Timestamp const& a, Timestamp const& b) {
    return a.epoch_millis == b.epoch_millis;
  }
  friend auto operator<=>(Timestamp const& a, Timestamp const& b) {
    return a.epoch_millis <=> b.epoch_millis;
  }
};

// Accepts "YYYY-MM-DD[T ]HH:MM[:SS[.fff]][Z|+HH:MM|-HH:MM]"; a missing
// offset means UTC.
absl::StatusOr<Timestamp> ParseTimestamp(std::string_view text);

// Label aliases searched for each metadata field (case-insensitive).
struct FieldLabels {
  std::vector<std::string> participant{"participant", "user", "author",
                                       "contestant"};
  std::vector<std::string> problem{"problem", "task", "problem id"};
  std::vector<std::string> verdict{"verdict", "status", "result"};
  std::vector<std::string> timestamp{"submitted", "submission time",
                                     "timestamp", "time", "date"};
  std::vector<std::string> language{"language", "lang"};
};

struct SubmissionParseOptions {
  FieldLabels labels;
  // Used when the artifact carries no participant field (e.g. the owning
  // directory name).
  std::optional<std::string> default_participant;
};

// Submission fields before turn/id assignment.
struct PartialAttempt {
  std::string participant;
  std::string problem;
  std::string code;
  std::string verdict;
  std::string language;
  Timestamp timestamp;
  std::string source_path;
};

// Errors: NotFound "MissingCode" when no code can be located, NotFound
// "MissingField(<name>)" for participant/problem/verdict/timestamp.
absl::StatusOr<PartialAttempt> ParseSubmission(
    RawSubmission const& raw, SubmissionParseOptions const& options = {});

// Text with script/style removed (HTML) or the trimmed body (md/txt).
std::string ExtractVisibleText(RawSubmission const& raw);

struct Attempt {
  std::string attempt_id;
  std::string participant;
  std::string problem;
  int turn = 0;
  std::string code;
  std::string prompt_text;
  Timestamp timestamp;
  std::string verdict;
  std::string language;
  int label = 0;
  std::string source_path;
  bool missing_context = false;

  friend bool operator==(Attempt const&, Attempt const&) = default;
};

int LabelFromVerdict(std::string_view verdict);

// Sorts by (participant, problem, timestamp, source_path), assigns turns
// 1..K per group, ids "{participant}:{problem}:{turn}" and labels.
std::vector<Attempt> BuildAttemptTable(std::vector<PartialAttempt> submissions);

struct ParticipantContext {
  std::string participant;
  std::vector<std::string> records;
  std::string aggregated;
  int record_count = 0;
};

struct PromptLogResult {
  ParticipantContext context;
  std::vector<std::string> warnings;  // one "EmptyLog: <path>" per skipped file
};

// Records are ordered by (filename, full path); each readable, non-empty
// file contributes one record.
absl::StatusOr<PromptLogResult> ParsePromptLogs(
    std::span<std::filesystem::path const> files, std::string participant,
    std::string_view separator = kDefaultRecordSeparator);

// Sets prompt_text = Q_u on every attempt; attempts of participants without
// a context get an empty prompt and missing_context = true.
std::vector<Attempt> AttachContext(
    std::vector<Attempt> table,
    std::map<std::string, ParticipantContext> const& contexts);

struct IngestOptions {
  SubmissionParseOptions parse;
  std::string separator{kDefaultRecordSeparator};
};

struct IngestResult {
  std::vector<Attempt> attempts;
  std::map<std::string, ParticipantContext> contexts;
  std::vector<std::string> warnings;
  int submission_files = 0;
  int prompt_files = 0;
};

// Walks <input>/<participant>/{submissions,prompts}/. Unparseable
// submissions become warnings rather than failing the whole corpus.
absl::StatusOr<IngestResult> IngestCorpus(std::filesystem::path const& input_dir,
                                          IngestOptions const& options = {});

// attempts.csv, code/, contexts.json and ingest_report.json under work_dir.
absl::Status WriteIngestArtifacts(std::filesystem::path const& work_dir,
                                  IngestResult const& result);

// Reloads the attempt table (code and prompt text included) and contexts.
absl::StatusOr<IngestResult> LoadIngestArtifacts(
    std::filesystem::path const& work_dir);

}  // namespace cojudge

#endif  // COJUDGE_INGEST_H_
