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

#include "cojudge/code_lexer.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>

#include "cojudge/text.h"

namespace cojudge {
namespace {

constexpr std::array kCppKeywords = {
    "alignas", "alignof", "auto", "bool", "break", "case", "catch", "char",
    "class", "const", "constexpr", "continue", "default", "delete", "do",
    "double", "else", "enum", "explicit", "extern", "false", "float", "for",
    "friend", "goto", "if", "inline", "int", "long", "mutable", "namespace",
    "new", "noexcept", "nullptr", "operator", "private", "protected", "public",
    "register", "return", "short", "signed", "sizeof", "static", "struct",
    "switch", "template", "this", "throw", "true", "try", "typedef", "typename",
    "union", "unsigned", "using", "virtual", "void", "volatile", "while",
    "include", "define"};

constexpr std::array kJavaKeywords = {
    "abstract", "boolean", "break", "byte", "case", "catch", "char", "class",
    "continue", "default", "do", "double", "else", "enum", "extends", "false",
    "final", "finally", "float", "for", "if", "implements", "import",
    "instanceof", "int", "interface", "long", "new", "null", "package",
    "private", "protected", "public", "return", "short", "static", "super",
    "switch", "this", "throw", "throws", "true", "try", "void", "while", "var"};

constexpr std::array kPythonKeywords = {
    "False", "None", "True", "and", "as", "assert", "async", "await", "break",
    "class", "continue", "def", "del", "elif", "else", "except", "finally",
    "for", "from", "global", "if", "import", "in", "is", "lambda", "nonlocal",
    "not", "or", "pass", "raise", "return", "try", "while", "with", "yield"};

constexpr std::array<std::string_view, 24> kMultiOps = {
    ">>=", "<<=", "...", "**=", "//=", "->", "::", "++", "--", "==", "!=", "<=",
    ">=", "&&", "||", "<<", ">>", "+=", "-=", "*=", "/=", "%=", "**", "//"};

bool IsIdentStart(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool IsIdentChar(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

class Lexer {
 public:
  Lexer(std::string_view src, Grammar g) : src_(src), g_(g) {}

  std::vector<CodeToken> Run() {
    std::vector<CodeToken> out;
    while (pos_ < src_.size()) {
      unsigned char const c = src_[pos_];
      if (std::isspace(c)) {
        ++pos_;
      } else if (SkipComment()) {
      } else if (IsIdentStart(c)) {
        auto const start = pos_;
        while (pos_ < src_.size() && IsIdentChar(src_[pos_])) ++pos_;
        std::string word(src_.substr(start, pos_ - start));
        if (g_ == Grammar::kPython && pos_ < src_.size() &&
            (src_[pos_] == '"' || src_[pos_] == '\'') && word.size() <= 2 &&
            word.find_first_not_of("rbfuRBFU") == std::string::npos) {
          out.push_back({std::string(src_.substr(start, ReadString() - start)),
                         TokenKind::kString, false});
          continue;
        }
        bool const kw = IsKeyword(g_, word);
        out.push_back({std::move(word), kw ? TokenKind::kKeyword : TokenKind::kIdentifier, kw});
      } else if (std::isdigit(c) ||
                 (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        auto const start = pos_;
        while (pos_ < src_.size() &&
               (IsIdentChar(src_[pos_]) || src_[pos_] == '.' || src_[pos_] == '\'' ||
                ((src_[pos_] == '+' || src_[pos_] == '-') &&
                 (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E')))) {
          ++pos_;
        }
        out.push_back({std::string(src_.substr(start, pos_ - start)), TokenKind::kNumber, false});
      } else if (c == '"' || c == '\'') {
        auto const start = pos_;
        auto const end = ReadString();
        out.push_back({std::string(src_.substr(start, end - start)), TokenKind::kString, false});
      } else {
        std::string_view op = src_.substr(pos_, 1);
        for (auto m : kMultiOps) {
          if (g_ != Grammar::kPython && (m == "**" || m == "//" || m == "**=" || m == "//=")) continue;
          if (src_.substr(pos_, m.size()) == m) {
            op = m;
            break;
          }
        }
        pos_ += op.size();
        out.push_back({std::string(op), TokenKind::kOperator, false});
      }
    }
    return out;
  }

 private:
  bool SkipComment() {
    auto rest = src_.substr(pos_);
    if (g_ == Grammar::kPython) {
      if (rest.front() != '#') return false;
      auto nl = rest.find('\n');
      pos_ = nl == std::string_view::npos ? src_.size() : pos_ + nl;
      return true;
    }
    if (rest.starts_with("//")) {
      auto nl = rest.find('\n');
      pos_ = nl == std::string_view::npos ? src_.size() : pos_ + nl;
      return true;
    }
    if (rest.starts_with("/*")) {
      auto end = rest.find("*/", 2);
      pos_ = end == std::string_view::npos ? src_.size() : pos_ + end + 2;
      return true;
    }
    return false;
  }

  // Consumes a quoted literal starting at pos_; returns the end offset.
  std::size_t ReadString() {
    char const q = src_[pos_];
    bool const triple = g_ == Grammar::kPython && src_.substr(pos_, 3) == std::string(3, q);
    pos_ += triple ? 3 : 1;
    while (pos_ < src_.size()) {
      char const c = src_[pos_];
      if (c == '\\') {
        pos_ += 2;
        continue;
      }
      if (triple) {
        if (src_.substr(pos_, 3) == std::string(3, q)) {
          pos_ += 3;
          return pos_;
        }
      } else if (c == q) {
        return ++pos_;
      } else if (c == '\n') {
        return pos_;
      }
      ++pos_;
    }
    pos_ = std::min(pos_, src_.size());
    return pos_;
  }

  std::string_view src_;
  Grammar g_;
  std::size_t pos_ = 0;
};

TokenizedCode FallbackTokens(std::string_view code) {
  TokenizedCode out;
  out.fallback = true;
  std::size_t i = 0;
  while (i < code.size()) {
    unsigned char const c = code[i];
    if (std::isspace(c)) {
      ++i;
    } else if (IsIdentChar(c)) {
      auto const start = i;
      while (i < code.size() && IsIdentChar(code[i])) ++i;
      out.tokens.push_back({std::string(code.substr(start, i - start)), TokenKind::kOther, false});
    } else {
      out.tokens.push_back({std::string(1, static_cast<char>(c)), TokenKind::kOther, false});
      ++i;
    }
  }
  return out;
}

std::string LeafLabel(CodeToken const& t) {
  switch (t.kind) {
    case TokenKind::kIdentifier:
      return "ID";
    case TokenKind::kNumber:
      return "NUM";
    case TokenKind::kString:
      return "STR";
    default:
      return t.text;
  }
}

// Recursive-descent over brackets for the C-family profiles.
class BraceParser {
 public:
  explicit BraceParser(std::vector<CodeToken> const& tokens) : t_(tokens) {}

  SyntaxNode Program() {
    SyntaxNode root{"program", Statements("")};
    while (i_ < t_.size()) {  // stray closers
      ++i_;
      auto more = Statements("");
      root.children.insert(root.children.end(), more.begin(), more.end());
    }
    return root;
  }

 private:
  // Statements until `closer` (or end of input).
  std::vector<SyntaxNode> Statements(std::string_view closer) {
    std::vector<SyntaxNode> out;
    SyntaxNode stmt{"stmt", {}};
    auto flush = [&] {
      if (!stmt.children.empty()) out.push_back(std::move(stmt));
      stmt = SyntaxNode{"stmt", {}};
    };
    while (i_ < t_.size()) {
      auto const& tok = t_[i_];
      if (tok.kind == TokenKind::kOperator && IsCloser(tok.text)) {
        if (tok.text == closer) ++i_;
        break;
      }
      if (tok.kind == TokenKind::kOperator && tok.text == "{") {
        ++i_;
        stmt.children.push_back({"block", Statements("}")});
        flush();
      } else if (tok.kind == TokenKind::kOperator && (tok.text == "(" || tok.text == "[")) {
        stmt.children.push_back(Group());
      } else {
        stmt.children.push_back({LeafLabel(tok), {}});
        ++i_;
        if (tok.kind == TokenKind::kOperator && tok.text == ";") flush();
      }
    }
    flush();
    return out;
  }

  SyntaxNode Group() {
    bool const paren = t_[i_].text == "(";
    std::string_view const closer = paren ? ")" : "]";
    ++i_;
    SyntaxNode node{paren ? "paren" : "bracket", {}};
    while (i_ < t_.size()) {
      auto const& tok = t_[i_];
      if (tok.kind == TokenKind::kOperator && IsCloser(tok.text)) {
        if (tok.text == closer) ++i_;
        break;
      }
      if (tok.kind == TokenKind::kOperator && (tok.text == "(" || tok.text == "[")) {
        node.children.push_back(Group());
      } else if (tok.kind == TokenKind::kOperator && tok.text == "{") {
        ++i_;
        node.children.push_back({"block", Statements("}")});
      } else {
        node.children.push_back({LeafLabel(tok), {}});
        ++i_;
      }
    }
    return node;
  }

  static bool IsCloser(std::string_view s) { return s == ")" || s == "]" || s == "}"; }

  std::vector<CodeToken> const& t_;
  std::size_t i_ = 0;
};

std::size_t Indent(std::string_view line) {
  std::size_t n = 0;
  for (char c : line) {
    if (c == ' ') {
      ++n;
    } else if (c == '\t') {
      n += 4;
    } else {
      break;
    }
  }
  return n;
}

// Indentation-structured tree for the Python profile; bracket groups inside
// a logical line become paren/bracket/block nodes.
SyntaxNode PythonTree(std::string_view code) {
  struct Line {
    std::size_t indent;
    std::vector<CodeToken> tokens;
  };
  std::vector<Line> lines;
  int depth = 0;
  for (auto const& raw : SplitLines(code)) {
    auto toks = TokenizeCode(raw, Grammar::kPython).tokens;
    if (toks.empty() && depth == 0) continue;
    if (depth > 0 && !lines.empty()) {
      lines.back().tokens.insert(lines.back().tokens.end(), toks.begin(), toks.end());
    } else {
      lines.push_back({Indent(raw), std::move(toks)});
    }
    depth = 0;
    for (auto const& t : lines.back().tokens) {
      if (t.kind != TokenKind::kOperator) continue;
      if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
      if (t.text == ")" || t.text == "]" || t.text == "}") depth = std::max(0, depth - 1);
    }
  }
  std::size_t i = 0;
  std::function<std::vector<SyntaxNode>(std::size_t)> block = [&](std::size_t indent) {
    std::vector<SyntaxNode> out;
    while (i < lines.size() && lines[i].indent >= indent) {
      auto const& line = lines[i++];
      BraceParser p(line.tokens);
      auto prog = p.Program();
      SyntaxNode stmt{"stmt", {}};
      for (auto& s : prog.children) {
        for (auto& c : s.children) stmt.children.push_back(std::move(c));
      }
      if (i < lines.size() && lines[i].indent > line.indent) {
        stmt.children.push_back({"block", block(lines[i].indent)});
      }
      out.push_back(std::move(stmt));
    }
    return out;
  };
  SyntaxNode root{"program", {}};
  while (i < lines.size()) {
    auto part = block(lines[i].indent);
    root.children.insert(root.children.end(), part.begin(), part.end());
  }
  return root;
}

void Collect(SyntaxNode const& n, std::vector<std::string>& out, std::string& scratch) {
  if (n.leaf()) return;
  std::function<void(SyntaxNode const&, std::string&)> sexp = [&](SyntaxNode const& x,
                                                                   std::string& s) {
    if (x.leaf()) {
      s += x.label;
      return;
    }
    s += '(';
    s += x.label;
    for (auto const& c : x.children) {
      s += ' ';
      sexp(c, s);
    }
    s += ')';
  };
  scratch.clear();
  sexp(n, scratch);
  out.push_back(scratch);
  for (auto const& c : n.children) Collect(c, out, scratch);
}

}  // namespace

std::string_view GrammarName(Grammar g) {
  switch (g) {
    case Grammar::kCpp:
      return "cpp";
    case Grammar::kJava:
      return "java";
    case Grammar::kPython:
      return "python";
  }
  return "unknown";
}

std::optional<Grammar> GrammarFromName(std::string_view name) {
  auto const n = ToLower(Trim(name));
  if (n == "cpp" || n == "c++" || n == "c") return Grammar::kCpp;
  if (n == "java") return Grammar::kJava;
  if (n == "python" || n == "py") return Grammar::kPython;
  return std::nullopt;
}

std::optional<Grammar> GrammarForLanguage(std::string_view language) {
  auto const n = ToLower(Trim(language));
  if (n.empty()) return std::nullopt;
  auto has = [&](std::string_view s) { return n.find(s) != std::string::npos; };
  if (has("c++") || has("cpp") || has("g++") || has("clang") || n == "c" || n == "cc" ||
      StartsWith(n, "c ") || StartsWith(n, "c1") || has("gnu c") || has("msvc")) {
    return Grammar::kCpp;
  }
  if (has("java") && !has("javascript")) return Grammar::kJava;
  if (has("python") || has("pypy") || n == "py" || StartsWith(n, "py3")) return Grammar::kPython;
  return std::nullopt;
}

bool IsKeyword(Grammar g, std::string_view word) {
  auto in = [&](auto const& list) {
    return std::find(list.begin(), list.end(), word) != list.end();
  };
  switch (g) {
    case Grammar::kCpp:
      return in(kCppKeywords);
    case Grammar::kJava:
      return in(kJavaKeywords);
    case Grammar::kPython:
      return in(kPythonKeywords);
  }
  return false;
}

TokenizedCode TokenizeCode(std::string_view code, std::optional<Grammar> grammar) {
  if (!grammar) return FallbackTokens(code);
  return {Lexer(code, *grammar).Run(), false};
}

SyntaxNode ParseSyntaxTree(std::string_view code, Grammar grammar) {
  if (grammar == Grammar::kPython) return PythonTree(code);
  auto const tokens = TokenizeCode(code, grammar).tokens;
  return BraceParser(tokens).Program();
}

std::vector<std::string> InternalSubtrees(SyntaxNode const& root) {
  std::vector<std::string> out;
  std::string scratch;
  Collect(root, out, scratch);
  return out;
}

}  // namespace cojudge
