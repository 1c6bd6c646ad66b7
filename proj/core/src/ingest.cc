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

#include "cojudge/ingest.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <set>
#include <tuple>

#include "absl/strings/str_cat.h"
#include "cojudge/html.h"
#include "cojudge/io.h"
#include "cojudge/text.h"
#include "nlohmann/json.hpp"

namespace cojudge {

namespace fs = std::filesystem;

namespace {

bool IsHtml(ArtifactFormat f) {
  return f == ArtifactFormat::kHtml || f == ArtifactFormat::kHtm;
}

// Reads N decimal digits at `pos`.
bool ReadDigits(std::string_view s, std::size_t& pos, int n, int& out) {
  if (pos + n > s.size()) return false;
  out = 0;
  for (int i = 0; i < n; ++i) {
    char const c = s[pos + i];
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    out = out * 10 + (c - '0');
  }
  pos += n;
  return true;
}

bool Expect(std::string_view s, std::size_t& pos, char c) {
  if (pos < s.size() && s[pos] == c) {
    ++pos;
    return true;
  }
  return false;
}

std::string FormatIso(std::int64_t epoch_millis) {
  using namespace std::chrono;
  auto const ms = milliseconds(epoch_millis);
  auto const days = floor<std::chrono::days>(ms);
  year_month_day const ymd{sys_days{days}};
  auto rem = ms - days;
  auto const h = duration_cast<hours>(rem);
  rem -= h;
  auto const m = duration_cast<minutes>(rem);
  rem -= m;
  auto const s = duration_cast<seconds>(rem);
  rem -= s;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(h.count()),
                static_cast<int>(m.count()), static_cast<int>(s.count()));
  std::string out = buf;
  if (rem.count() != 0) {
    std::snprintf(buf, sizeof(buf), ".%03d", static_cast<int>(rem.count()));
    out += buf;
  }
  out += "Z";
  return out;
}

// Strips markdown decoration so "**Verdict:** AC" and "- Verdict: AC" read
// like "Verdict: AC".
std::string NormalizeLabelLine(std::string_view line) {
  std::string out;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if ((line[i] == '*' || line[i] == '_') && i + 1 < line.size() &&
        line[i + 1] == line[i]) {
      ++i;
      continue;
    }
    if (line[i] == '`') continue;
    out.push_back(line[i]);
  }
  auto trimmed = Trim(out);
  std::size_t start = 0;
  while (start < trimmed.size() &&
         (trimmed[start] == '-' || trimmed[start] == '*' ||
          trimmed[start] == '#' || trimmed[start] == '>' ||
          trimmed[start] == ' ')) {
    ++start;
  }
  return Trim(std::string_view(trimmed).substr(start));
}

bool MatchesLabel(std::string_view key, std::vector<std::string> const& labels) {
  auto const k = ToLower(Trim(key));
  return std::find(labels.begin(), labels.end(), k) != labels.end();
}

// Finds the first value for `labels`: "Label: value", "| Label | value |",
// or a line holding only the label followed by the value on the next
// non-empty line.
std::optional<std::string> FindLabeledValue(
    std::vector<std::string> const& lines,
    std::vector<std::string> const& labels) {
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto const line = NormalizeLabelLine(lines[i]);
    if (line.empty()) continue;
    if (line.find('|') != std::string::npos) {
      std::vector<std::string> cells;
      for (auto& c : SplitString(line, '|')) {
        auto t = Trim(c);
        if (!t.empty()) cells.push_back(std::move(t));
      }
      if (cells.size() >= 2 && MatchesLabel(cells[0], labels)) {
        return cells[1];
      }
      continue;
    }
    auto const colon = line.find(':');
    if (colon != std::string::npos) {
      auto const key = std::string_view(line).substr(0, colon);
      if (MatchesLabel(key, labels)) {
        auto value = Trim(std::string_view(line).substr(colon + 1));
        if (!value.empty()) return value;
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
          auto next = NormalizeLabelLine(lines[j]);
          if (!next.empty()) return next;
        }
        return std::nullopt;
      }
    }
    if (MatchesLabel(line, labels)) {
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        auto next = NormalizeLabelLine(lines[j]);
        if (!next.empty()) return next;
      }
    }
  }
  return std::nullopt;
}

struct FencedBlock {
  std::string info;
  std::string content;
};

std::vector<FencedBlock> FencedBlocks(std::string_view body) {
  std::vector<FencedBlock> blocks;
  auto const lines = SplitLines(body);
  std::optional<FencedBlock> open;
  std::string fence;
  for (auto const& raw : lines) {
    auto const line = Trim(raw);
    if (!open) {
      if (StartsWith(line, "```") || StartsWith(line, "~~~")) {
        std::size_t n = 0;
        while (n < line.size() && line[n] == line[0]) ++n;
        fence = line.substr(0, n);
        open = FencedBlock{Trim(std::string_view(line).substr(n)), {}};
      }
      continue;
    }
    if (StartsWith(line, fence) && Trim(std::string_view(line).substr(fence.size())).empty()) {
      blocks.push_back(std::move(*open));
      open.reset();
      continue;
    }
    open->content += raw;
    open->content.push_back('\n');
  }
  if (open) blocks.push_back(std::move(*open));
  return blocks;
}

// Longest by code points; earlier wins ties.
std::optional<std::size_t> LongestNonEmpty(std::vector<std::string> const& v) {
  std::optional<std::size_t> best;
  std::size_t best_len = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (Trim(v[i]).empty()) continue;
    auto const len = Utf8Length(v[i]);
    if (!best || len > best_len) {
      best = i;
      best_len = len;
    }
  }
  return best;
}

std::string SafeName(std::string_view text) {
  std::string out;
  for (char c : text) {
    auto const u = static_cast<unsigned char>(c);
    out.push_back(std::isalnum(u) || c == '-' || c == '_' || c == '.' ? c : '_');
  }
  if (out.empty()) out = "_";
  return out.substr(0, 48);
}

std::string CodePath(Attempt const& a) {
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(a.attempt_id)));
  return absl::StrCat("code/", SafeName(a.participant), "/", SafeName(a.problem),
                      "_", a.turn, "_", std::string(hash, 8), ".txt");
}

}  // namespace

absl::StatusOr<ArtifactFormat> FormatFromPath(fs::path const& p) {
  auto const ext = ToLower(p.extension().string());
  if (ext == ".html") return ArtifactFormat::kHtml;
  if (ext == ".htm") return ArtifactFormat::kHtm;
  if (ext == ".md") return ArtifactFormat::kMarkdown;
  if (ext == ".txt") return ArtifactFormat::kText;
  return absl::InvalidArgumentError(
      absl::StrCat("unsupported artifact extension '", ext, "': ", p.string()));
}

std::string_view FormatName(ArtifactFormat format) {
  switch (format) {
    case ArtifactFormat::kHtml:
      return "html";
    case ArtifactFormat::kHtm:
      return "htm";
    case ArtifactFormat::kMarkdown:
      return "md";
    case ArtifactFormat::kText:
      return "txt";
  }
  return "txt";
}

absl::StatusOr<RawSubmission> RawSubmission::Create(fs::path path,
                                                    std::string body) {
  auto format = FormatFromPath(path);
  if (!format.ok()) return format.status();
  if (Trim(body).empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("empty artifact: ", path.string()));
  }
  return RawSubmission{std::move(path), *format, std::move(body)};
}

absl::StatusOr<RawSubmission> RawSubmission::Load(fs::path const& path) {
  auto body = ReadFile(path);
  if (!body.ok()) return body.status();
  return Create(path, *std::move(body));
}

absl::StatusOr<Timestamp> ParseTimestamp(std::string_view text) {
  auto const s = Trim(text);
  std::size_t pos = 0;
  int y, mo, d, h = 0, mi = 0, sec = 0, millis = 0;
  auto bad = [&] {
    return absl::InvalidArgumentError(absl::StrCat("bad timestamp '", s, "'"));
  };
  if (!ReadDigits(s, pos, 4, y) || !Expect(s, pos, '-') ||
      !ReadDigits(s, pos, 2, mo) || !Expect(s, pos, '-') ||
      !ReadDigits(s, pos, 2, d)) {
    return bad();
  }
  if (pos < s.size() && (s[pos] == 'T' || s[pos] == ' ')) {
    ++pos;
    if (!ReadDigits(s, pos, 2, h) || !Expect(s, pos, ':') ||
        !ReadDigits(s, pos, 2, mi)) {
      return bad();
    }
    if (Expect(s, pos, ':')) {
      if (!ReadDigits(s, pos, 2, sec)) return bad();
      if (Expect(s, pos, '.')) {
        int scale = 100;
        bool any = false;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
          millis += (s[pos] - '0') * scale;
          scale /= 10;
          any = true;
          ++pos;
        }
        if (!any) return bad();
      }
    }
  }
  int offset_minutes = 0;
  if (pos < s.size()) {
    if (s[pos] == 'Z' || s[pos] == 'z') {
      ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
      int const sign = s[pos] == '-' ? -1 : 1;
      ++pos;
      int oh, om = 0;
      if (!ReadDigits(s, pos, 2, oh)) return bad();
      Expect(s, pos, ':');
      if (pos < s.size() && !ReadDigits(s, pos, 2, om)) return bad();
      offset_minutes = sign * (oh * 60 + om);
    }
  }
  if (pos != s.size()) return bad();
  using namespace std::chrono;
  year_month_day const ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) return bad();
  auto const tp = sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec} +
                  milliseconds{millis} - minutes{offset_minutes};
  Timestamp ts;
  ts.epoch_millis = duration_cast<milliseconds>(tp.time_since_epoch()).count();
  ts.iso = FormatIso(ts.epoch_millis);
  return ts;
}

std::string ExtractVisibleText(RawSubmission const& raw) {
  if (IsHtml(raw.format)) return html::VisibleText(raw.body);
  return Trim(raw.body);
}

absl::StatusOr<PartialAttempt> ParseSubmission(
    RawSubmission const& raw, SubmissionParseOptions const& options) {
  PartialAttempt out;
  out.source_path = raw.source_path.generic_string();
  std::string label_text;
  std::optional<std::string> fence_language;
  if (IsHtml(raw.format)) {
    auto pres = html::ElementTexts(raw.body, "pre");
    auto best = LongestNonEmpty(pres);
    if (best) {
      out.code = std::move(pres[*best]);
    } else {
      auto codes = html::ElementTexts(raw.body, "code");
      auto best_code = LongestNonEmpty(codes);
      if (!best_code) {
        return absl::NotFoundError(
            absl::StrCat("MissingCode: ", raw.source_path.string()));
      }
      out.code = std::move(codes[*best_code]);
    }
    html::VisibleTextOptions vt;
    vt.drop_elements = {"pre", "code"};
    label_text = html::VisibleText(raw.body, vt);
  } else {
    auto blocks = FencedBlocks(raw.body);
    std::vector<std::string> contents;
    for (auto const& b : blocks) contents.push_back(b.content);
    auto best = LongestNonEmpty(contents);
    if (best) {
      out.code = std::move(contents[*best]);
      if (!blocks[*best].info.empty()) {
        fence_language = SplitString(blocks[*best].info, ' ').front();
      }
      // Labels are read outside the fences.
      std::string outside;
      bool in_fence = false;
      for (auto const& line : SplitLines(raw.body)) {
        auto const t = Trim(line);
        if (StartsWith(t, "```") || StartsWith(t, "~~~")) {
          in_fence = !in_fence;
          continue;
        }
        if (!in_fence) outside += line + "\n";
      }
      label_text = std::move(outside);
    } else {
      out.code = raw.body;
      label_text = raw.body;
    }
    if (Trim(out.code).empty()) {
      return absl::NotFoundError(
          absl::StrCat("MissingCode: ", raw.source_path.string()));
    }
  }

  auto const lines = SplitLines(label_text);
  auto const& labels = options.labels;
  auto participant = FindLabeledValue(lines, labels.participant);
  if (!participant) participant = options.default_participant;
  if (!participant || participant->empty()) {
    return absl::NotFoundError("MissingField(participant)");
  }
  auto problem = FindLabeledValue(lines, labels.problem);
  if (!problem) return absl::NotFoundError("MissingField(problem)");
  auto verdict = FindLabeledValue(lines, labels.verdict);
  if (!verdict) return absl::NotFoundError("MissingField(verdict)");
  auto ts_text = FindLabeledValue(lines, labels.timestamp);
  if (!ts_text) return absl::NotFoundError("MissingField(timestamp)");
  auto ts = ParseTimestamp(*ts_text);
  if (!ts.ok()) {
    return absl::NotFoundError(
        absl::StrCat("MissingField(timestamp): ", ts.status().message()));
  }
  auto language = FindLabeledValue(lines, labels.language);
  if (!language) language = fence_language;

  out.participant = *participant;
  out.problem = *problem;
  // Verdict tokens are compared exactly; keep only the leading token so
  // "AC (0.12s)" still reads as AC.
  out.verdict = SplitString(Trim(*verdict), ' ').front();
  out.timestamp = *std::move(ts);
  out.language = language ? *language : "unknown";
  return out;
}

int LabelFromVerdict(std::string_view verdict) {
  return verdict == kAcceptedVerdict ? 1 : 0;
}

std::vector<Attempt> BuildAttemptTable(std::vector<PartialAttempt> submissions) {
  std::stable_sort(submissions.begin(), submissions.end(),
                   [](PartialAttempt const& a, PartialAttempt const& b) {
                     return std::tie(a.participant, a.problem,
                                     a.timestamp.epoch_millis, a.source_path) <
                            std::tie(b.participant, b.problem,
                                     b.timestamp.epoch_millis, b.source_path);
                   });
  std::vector<Attempt> table;
  table.reserve(submissions.size());
  for (auto& s : submissions) {
    Attempt a;
    bool const same_group = !table.empty() &&
                            table.back().participant == s.participant &&
                            table.back().problem == s.problem;
    a.turn = same_group ? table.back().turn + 1 : 1;
    a.participant = std::move(s.participant);
    a.problem = std::move(s.problem);
    a.attempt_id = absl::StrCat(a.participant, ":", a.problem, ":", a.turn);
    a.code = std::move(s.code);
    a.timestamp = std::move(s.timestamp);
    a.verdict = std::move(s.verdict);
    a.language = std::move(s.language);
    a.label = LabelFromVerdict(a.verdict);
    a.source_path = std::move(s.source_path);
    table.push_back(std::move(a));
  }
  return table;
}

absl::StatusOr<PromptLogResult> ParsePromptLogs(
    std::span<fs::path const> files, std::string participant,
    std::string_view separator) {
  std::vector<fs::path> ordered(files.begin(), files.end());
  std::sort(ordered.begin(), ordered.end(), [](fs::path const& a, fs::path const& b) {
    return std::make_tuple(a.filename().generic_string(), a.generic_string()) <
           std::make_tuple(b.filename().generic_string(), b.generic_string());
  });
  PromptLogResult result;
  result.context.participant = std::move(participant);
  for (auto const& path : ordered) {
    auto body = ReadFile(path);
    if (!body.ok()) return body.status();
    std::string text;
    auto format = FormatFromPath(path);
    if (format.ok() && IsHtml(*format)) {
      text = html::VisibleText(*body);
    } else {
      text = Trim(*body);
    }
    if (text.empty()) {
      result.warnings.push_back(absl::StrCat("EmptyLog: ", path.generic_string()));
      continue;
    }
    result.context.records.push_back(std::move(text));
  }
  result.context.aggregated = Join(result.context.records, separator);
  result.context.record_count = static_cast<int>(result.context.records.size());
  return result;
}

std::vector<Attempt> AttachContext(
    std::vector<Attempt> table,
    std::map<std::string, ParticipantContext> const& contexts) {
  for (auto& a : table) {
    auto it = contexts.find(a.participant);
    if (it == contexts.end()) {
      a.prompt_text.clear();
      a.missing_context = true;
    } else {
      a.prompt_text = it->second.aggregated;
      a.missing_context = false;
    }
  }
  return table;
}

absl::StatusOr<IngestResult> IngestCorpus(fs::path const& input_dir,
                                          IngestOptions const& options) {
  std::error_code ec;
  if (!fs::is_directory(input_dir, ec)) {
    return absl::NotFoundError(
        absl::StrCat("input directory not found: ", input_dir.string()));
  }
  std::vector<fs::path> participant_dirs;
  for (auto const& entry : fs::directory_iterator(input_dir)) {
    if (entry.is_directory()) participant_dirs.push_back(entry.path());
  }
  std::sort(participant_dirs.begin(), participant_dirs.end());

  IngestResult result;
  std::vector<PartialAttempt> partials;
  for (auto const& dir : participant_dirs) {
    auto const participant_hint = dir.filename().string();
    auto collect = [&](fs::path const& sub) {
      std::vector<fs::path> files;
      if (!fs::is_directory(sub, ec)) return files;
      for (auto const& e : fs::recursive_directory_iterator(sub)) {
        if (e.is_regular_file()) files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      return files;
    };
    for (auto const& path : collect(dir / "submissions")) {
      ++result.submission_files;
      auto raw = RawSubmission::Load(path);
      if (!raw.ok()) {
        result.warnings.push_back(std::string(raw.status().message()));
        continue;
      }
      auto parse_opts = options.parse;
      parse_opts.default_participant = participant_hint;
      auto partial = ParseSubmission(*raw, parse_opts);
      if (!partial.ok()) {
        result.warnings.push_back(absl::StrCat(
            partial.status().message(), " in ", path.generic_string()));
        continue;
      }
      partials.push_back(*std::move(partial));
    }
    auto prompt_files = collect(dir / "prompts");
    result.prompt_files += static_cast<int>(prompt_files.size());
    if (prompt_files.empty()) continue;
    auto logs = ParsePromptLogs(prompt_files, participant_hint, options.separator);
    if (!logs.ok()) return logs.status();
    for (auto& w : logs->warnings) result.warnings.push_back(std::move(w));
    if (logs->context.record_count > 0) {
      result.contexts[participant_hint] = std::move(logs->context);
    }
  }
  result.attempts = AttachContext(BuildAttemptTable(std::move(partials)),
                                  result.contexts);
  std::set<std::string> missing;
  for (auto const& a : result.attempts) {
    if (a.missing_context) missing.insert(a.participant);
  }
  for (auto const& u : missing) {
    result.warnings.push_back(absl::StrCat("MissingContext(", u, ")"));
  }
  return result;
}

absl::Status WriteIngestArtifacts(fs::path const& work_dir,
                                  IngestResult const& result) {
  std::string csv = CsvRow({"attempt_id", "participant", "problem", "turn",
                            "timestamp", "language", "verdict", "label",
                            "code_path", "prompt_chars"});
  for (auto const& a : result.attempts) {
    auto const code_path = CodePath(a);
    if (auto s = WriteFileAtomic(work_dir / code_path, a.code); !s.ok()) return s;
    csv += CsvRow({a.attempt_id, a.participant, a.problem,
                   std::to_string(a.turn), a.timestamp.iso, a.language,
                   a.verdict, std::to_string(a.label), code_path,
                   std::to_string(Utf8Length(a.prompt_text))});
  }
  if (auto s = WriteFileAtomic(work_dir / "attempts.csv", csv); !s.ok()) return s;

  nlohmann::json contexts = nlohmann::json::array();
  for (auto const& [u, ctx] : result.contexts) {
    contexts.push_back({{"participant", u},
                        {"record_count", ctx.record_count},
                        {"records", ctx.records},
                        {"aggregated", ctx.aggregated}});
  }
  if (auto s = WriteFileAtomic(work_dir / "contexts.json", contexts.dump(1) + "\n");
      !s.ok()) {
    return s;
  }

  std::set<std::string> participants;
  std::set<std::string> missing;
  for (auto const& a : result.attempts) {
    participants.insert(a.participant);
    if (a.missing_context) missing.insert(a.participant);
  }
  nlohmann::json report = {
      {"attempts", result.attempts.size()},
      {"participants", participants.size()},
      {"submission_files", result.submission_files},
      {"prompt_files", result.prompt_files},
      {"missing_context", missing},
      {"warnings", result.warnings},
  };
  return WriteFileAtomic(work_dir / "ingest_report.json", report.dump(2) + "\n");
}

absl::StatusOr<IngestResult> LoadIngestArtifacts(fs::path const& work_dir) {
  auto text = ReadFile(work_dir / "attempts.csv");
  if (!text.ok()) return text.status();
  auto table = ParseCsv(*text);
  if (!table.ok()) return table.status();
  IngestResult result;

  auto ctx_text = ReadFile(work_dir / "contexts.json");
  if (!ctx_text.ok()) return ctx_text.status();
  auto ctx_json = nlohmann::json::parse(*ctx_text, nullptr, false);
  if (ctx_json.is_discarded() || !ctx_json.is_array()) {
    return absl::DataLossError("contexts.json is not a JSON array");
  }
  for (auto const& c : ctx_json) {
    ParticipantContext ctx;
    ctx.participant = c.value("participant", "");
    ctx.records = c.value("records", std::vector<std::string>{});
    ctx.aggregated = c.value("aggregated", "");
    ctx.record_count = c.value("record_count", 0);
    result.contexts[ctx.participant] = std::move(ctx);
  }

  std::vector<std::string> const required = {
      "attempt_id", "participant", "problem", "turn",     "timestamp",
      "language",   "verdict",     "label",   "code_path"};
  std::map<std::string, int> col;
  for (auto const& name : required) {
    col[name] = table->Column(name);
    if (col[name] < 0) {
      return absl::DataLossError(absl::StrCat("attempts.csv lacks column ", name));
    }
  }
  for (auto const& row : table->rows) {
    Attempt a;
    a.attempt_id = row[col["attempt_id"]];
    a.participant = row[col["participant"]];
    a.problem = row[col["problem"]];
    a.turn = std::stoi(row[col["turn"]]);
    auto ts = ParseTimestamp(row[col["timestamp"]]);
    if (!ts.ok()) return ts.status();
    a.timestamp = *std::move(ts);
    a.language = row[col["language"]];
    a.verdict = row[col["verdict"]];
    a.label = std::stoi(row[col["label"]]);
    auto code = ReadFile(work_dir / row[col["code_path"]]);
    if (!code.ok()) return code.status();
    a.code = *std::move(code);
    result.attempts.push_back(std::move(a));
  }
  result.attempts = AttachContext(std::move(result.attempts), result.contexts);
  return result;
}

}  // namespace cojudge
