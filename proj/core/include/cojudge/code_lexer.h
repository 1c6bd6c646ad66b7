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

#ifndef COJUDGE_CODE_LEXER_H_
#define COJUDGE_CODE_LEXER_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cojudge {

// Grammar profiles. C sources use the C++ profile.
enum class Grammar { kCpp, kJava, kPython };

std::string_view GrammarName(Grammar g);
std::optional<Grammar> GrammarFromName(std::string_view name);

// Maps a submission language token ("GNU C++17", "C", "Python 3", "Java 11",
// ...) to a profile; nullopt when no grammar applies.
std::optional<Grammar> GrammarForLanguage(std::string_view language);

enum class TokenKind { kKeyword, kIdentifier, kNumber, kString, kOperator, kOther };

struct CodeToken {
  std::string text;
  TokenKind kind = TokenKind::kOther;
  bool is_keyword = false;

  friend bool operator==(CodeToken const&, CodeToken const&) = default;
};

struct TokenizedCode {
  std::vector<CodeToken> tokens;
  bool fallback = false;  // no grammar; whitespace/punctuation split
};

bool IsKeyword(Grammar g, std::string_view word);

// Comments are dropped. Without a grammar, splits on whitespace and
// punctuation and sets `fallback`.
TokenizedCode TokenizeCode(std::string_view code, std::optional<Grammar> grammar);

// Node-type-labeled structural tree. Leaves carry the token class
// (identifiers normalized to "ID", literals to "NUM"/"STR"; keywords and
// operators keep their text); internal nodes are program / block / paren /
// bracket / stmt.
struct SyntaxNode {
  std::string label;
  std::vector<SyntaxNode> children;

  bool leaf() const { return children.empty(); }
};

SyntaxNode ParseSyntaxTree(std::string_view code, Grammar grammar);

// S-expressions of every internal node, pre-order.
std::vector<std::string> InternalSubtrees(SyntaxNode const& root);

}  // namespace cojudge

#endif  // COJUDGE_CODE_LEXER_H_
