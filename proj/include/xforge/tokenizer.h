//
// Copyright 2026 The xforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef XFORGE_TOKENIZER_H_
#define XFORGE_TOKENIZER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xforge {

enum class TokenizerMode {
  kSpaceDelimited,  // maximal non-space runs, edge punctuation split off
  kCjkChar,         // every non-space code point is a token
  kMixed,           // CJK code points alone, other runs as kSpaceDelimited
};

struct TokenizerPolicy {
  TokenizerMode mode = TokenizerMode::kMixed;
};

std::string_view ModeName(TokenizerMode mode);
// Accepts "space", "cjk", "mixed" and the long names.
std::optional<TokenizerMode> ParseMode(std::string_view name);

struct Token {
  std::u32string text;
  int64_t start = 0;  // code points, inclusive
  int64_t end = 0;    // code points, exclusive
  bool is_punct = false;
};

// Tokens over a source text. Tokens never overlap and are sorted by start;
// the code points between consecutive tokens are whitespace.
class TokenSpan {
 public:
  TokenSpan(std::u32string source, std::vector<Token> tokens)
      : source_(std::move(source)), tokens_(std::move(tokens)) {}

  const std::u32string& source() const { return source_; }
  const std::vector<Token>& tokens() const { return tokens_; }
  size_t size() const { return tokens_.size(); }
  const Token& operator[](size_t i) const { return tokens_[i]; }

  // Text before token `i`; `Gap(size())` is the trailing text.
  std::u32string_view Gap(size_t i) const;

  // Concatenates gaps and tokens; equals source() by construction.
  std::u32string Reassemble() const;

 private:
  std::u32string source_;
  std::vector<Token> tokens_;
};

TokenSpan Tokenize(std::u32string_view text, TokenizerPolicy policy);
TokenSpan Tokenize(std::string_view utf8, TokenizerPolicy policy);

// Result of replacing some tokens of a span while keeping every gap.
struct Rewrite {
  std::u32string text;
  // new_start[i] / new_end[i] locate token i in `text`.
  std::vector<int64_t> new_start;
  std::vector<int64_t> new_end;

  // Maps a span [start, end) of the source onto `text`. Boundaries that fall
  // inside a token snap outward to the token edges.
  std::pair<int64_t, int64_t> MapSpan(const TokenSpan& span, int64_t start,
                                      int64_t end) const;
};

// `replacements[i]` empty-optional keeps token i unchanged.
Rewrite RewriteTokens(const TokenSpan& span,
                      const std::vector<std::optional<std::u32string>>&
                          replacements);

}  // namespace xforge

#endif  // XFORGE_TOKENIZER_H_
