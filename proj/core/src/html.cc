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

#include "cojudge/html.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <optional>

#include "cojudge/text.h"

namespace cojudge::html {
namespace {

enum class EventKind { kText, kStartTag, kEndTag };

struct Event {
  EventKind kind;
  std::string_view text;  // raw text, or lowercase-insensitive tag name
  std::string name;
  bool self_closing = false;
};

bool IEquals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

std::size_t IFind(std::string_view hay, std::string_view needle,
                  std::size_t from) {
  if (needle.size() > hay.size()) return std::string_view::npos;
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
    if (IEquals(hay.substr(i, needle.size()), needle)) return i;
  }
  return std::string_view::npos;
}

bool IsRawTextElement(std::string_view name) {
  return name == "script" || name == "style" || name == "textarea" ||
         name == "title";
}

// Splits HTML into text runs and tags. Raw-text elements (script, style)
// are emitted as start tag, one text event, end tag.
std::vector<Event> Tokenize(std::string_view html) {
  std::vector<Event> events;
  std::size_t pos = 0;
  std::size_t text_start = 0;
  auto flush_text = [&](std::size_t end) {
    if (end > text_start) {
      events.push_back({EventKind::kText, html.substr(text_start, end - text_start), {}});
    }
  };
  while (pos < html.size()) {
    if (html[pos] != '<') {
      ++pos;
      continue;
    }
    if (html.substr(pos, 4) == "<!--") {
      flush_text(pos);
      auto end = html.find("-->", pos + 4);
      pos = end == std::string_view::npos ? html.size() : end + 3;
      text_start = pos;
      continue;
    }
    if (pos + 1 < html.size() && (html[pos + 1] == '!' || html[pos + 1] == '?')) {
      flush_text(pos);
      auto end = html.find('>', pos);
      pos = end == std::string_view::npos ? html.size() : end + 1;
      text_start = pos;
      continue;
    }
    bool const closing = pos + 1 < html.size() && html[pos + 1] == '/';
    std::size_t name_begin = pos + (closing ? 2 : 1);
    std::size_t name_end = name_begin;
    while (name_end < html.size() &&
           (std::isalnum(static_cast<unsigned char>(html[name_end])) ||
            html[name_end] == '-')) {
      ++name_end;
    }
    if (name_end == name_begin) {
      ++pos;  // a literal '<'
      continue;
    }
    // Find the closing '>' while respecting quoted attribute values.
    std::size_t end = name_end;
    char quote = 0;
    while (end < html.size()) {
      char const c = html[end];
      if (quote) {
        if (c == quote) quote = 0;
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '>') {
        break;
      }
      ++end;
    }
    flush_text(pos);
    std::string name = ToLower(html.substr(name_begin, name_end - name_begin));
    bool const self_closing = end > 0 && end < html.size() && html[end - 1] == '/';
    events.push_back({closing ? EventKind::kEndTag : EventKind::kStartTag, {},
                      name, self_closing});
    pos = end == html.size() ? end : end + 1;
    text_start = pos;
    if (!closing && IsRawTextElement(name)) {
      auto close = IFind(html, "</" + name, pos);
      std::size_t text_end = close == std::string_view::npos ? html.size() : close;
      flush_text(text_end);
      if (close == std::string_view::npos) {
        pos = html.size();
      } else {
        auto gt = html.find('>', close);
        pos = gt == std::string_view::npos ? html.size() : gt + 1;
        events.push_back({EventKind::kEndTag, {}, name});
      }
      text_start = pos;
    }
  }
  flush_text(html.size());
  return events;
}

bool IsBlockElement(std::string_view name) {
  static constexpr std::array<std::string_view, 33> kBlocks = {
      "address", "article", "aside",  "blockquote", "body",  "br",
      "caption", "dd",      "div",    "dl",         "dt",    "fieldset",
      "figure",  "footer",  "form",   "h1",         "h2",    "h3",
      "h4",      "h5",      "h6",     "header",     "hr",    "li",
      "main",    "nav",     "ol",     "p",          "pre",   "section",
      "table",   "td",      "tr"};
  return name == "th" || name == "ul" || name == "thead" || name == "tbody" ||
         std::find(kBlocks.begin(), kBlocks.end(), name) != kBlocks.end();
}

std::optional<std::string> NamedEntity(std::string_view name) {
  if (name == "amp") return "&";
  if (name == "lt") return "<";
  if (name == "gt") return ">";
  if (name == "quot") return "\"";
  if (name == "apos") return "'";
  if (name == "nbsp") return " ";
  if (name == "#39") return "'";
  return std::nullopt;
}

}  // namespace

std::string DecodeEntities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] != '&') {
      out.push_back(text[pos++]);
      continue;
    }
    auto semi = text.find(';', pos);
    if (semi == std::string_view::npos || semi - pos > 10) {
      out.push_back(text[pos++]);
      continue;
    }
    auto name = text.substr(pos + 1, semi - pos - 1);
    if (!name.empty() && name[0] == '#') {
      std::uint32_t cp = 0;
      bool ok = name.size() > 1;
      bool const hex = ok && (name[1] == 'x' || name[1] == 'X');
      for (std::size_t i = hex ? 2 : 1; ok && i < name.size(); ++i) {
        auto const c = static_cast<unsigned char>(name[i]);
        if (hex && std::isxdigit(c)) {
          cp = cp * 16 + static_cast<std::uint32_t>(
                             std::isdigit(c) ? c - '0' : std::tolower(c) - 'a' + 10);
        } else if (!hex && std::isdigit(c)) {
          cp = cp * 10 + (c - '0');
        } else {
          ok = false;
        }
        if (cp > 0x10FFFF) ok = false;
      }
      if (ok && (!hex || name.size() > 2)) {
        out += EncodeUtf8(std::u32string(1, static_cast<char32_t>(cp)));
        pos = semi + 1;
        continue;
      }
    } else if (auto decoded = NamedEntity(name)) {
      out += *decoded;
      pos = semi + 1;
      continue;
    }
    out.push_back(text[pos++]);
  }
  return out;
}

std::string VisibleText(std::string_view html,
                        VisibleTextOptions const& options) {
  auto dropped = [&](std::string_view name) {
    return name == "script" || name == "style" || name == "head" ||
           std::find(options.drop_elements.begin(), options.drop_elements.end(),
                     name) != options.drop_elements.end();
  };
  std::string out;
  int drop_depth = 0;
  int pre_depth = 0;
  std::string drop_name;
  for (auto const& ev : Tokenize(html)) {
    if (ev.kind == EventKind::kStartTag) {
      if (drop_depth > 0) {
        if (ev.name == drop_name && !ev.self_closing) ++drop_depth;
        continue;
      }
      if (dropped(ev.name) && !ev.self_closing) {
        drop_name = ev.name;
        drop_depth = 1;
        continue;
      }
      if (ev.name == "pre") ++pre_depth;
      if (IsBlockElement(ev.name)) out.push_back('\n');
      continue;
    }
    if (ev.kind == EventKind::kEndTag) {
      if (drop_depth > 0) {
        if (ev.name == drop_name) --drop_depth;
        continue;
      }
      if (ev.name == "pre" && pre_depth > 0) --pre_depth;
      if (IsBlockElement(ev.name)) out.push_back('\n');
      continue;
    }
    if (drop_depth > 0) continue;
    auto decoded = DecodeEntities(ev.text);
    if (pre_depth > 0) {
      out += decoded;
      continue;
    }
    bool space = false;
    for (char c : decoded) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        space = true;
        continue;
      }
      if (space && !out.empty() && out.back() != '\n') out.push_back(' ');
      space = false;
      out.push_back(c);
    }
    if (space && !out.empty() && out.back() != '\n') out.push_back(' ');
  }
  // Trim lines and squeeze blank-line runs.
  std::string result;
  bool pending_blank = false;
  for (auto const& line : SplitLines(out)) {
    auto trimmed = Trim(line);
    if (trimmed.empty()) {
      pending_blank = !result.empty();
      continue;
    }
    if (!result.empty()) result += pending_blank ? "\n\n" : "\n";
    pending_blank = false;
    result += trimmed;
  }
  return result;
}

std::vector<std::string> ElementTexts(std::string_view html,
                                      std::string_view tag) {
  std::string const want = ToLower(tag);
  std::vector<std::string> texts;
  std::string current;
  int depth = 0;
  int drop_depth = 0;
  bool at_open = false;
  for (auto const& ev : Tokenize(html)) {
    if (ev.kind == EventKind::kStartTag) {
      if (ev.name == want && !ev.self_closing) {
        if (depth == 0) current.clear();
        ++depth;
        at_open = depth == 1;
        continue;
      }
      if (depth > 0 && (ev.name == "script" || ev.name == "style")) {
        ++drop_depth;
      } else if (depth > 0 && ev.name == "br") {
        current.push_back('\n');
      }
      continue;
    }
    if (ev.kind == EventKind::kEndTag) {
      if (depth > 0 && (ev.name == "script" || ev.name == "style")) {
        drop_depth = std::max(0, drop_depth - 1);
      } else if (ev.name == want && depth > 0) {
        if (--depth == 0) texts.push_back(std::move(current));
        current.clear();
      }
      continue;
    }
    if (depth == 0 || drop_depth > 0) continue;
    auto decoded = DecodeEntities(ev.text);
    if (at_open) {
      if (StartsWith(decoded, "\r\n")) {
        decoded.erase(0, 2);
      } else if (StartsWith(decoded, "\n")) {
        decoded.erase(0, 1);
      }
      at_open = false;
    }
    current += decoded;
  }
  if (depth > 0) texts.push_back(std::move(current));
  return texts;
}

}  // namespace cojudge::html
