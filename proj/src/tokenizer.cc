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

#include "xforge/tokenizer.h"

#include <algorithm>

#include "xforge/text.h"

namespace xforge {
namespace {

void PushToken(std::u32string_view text, int64_t start, int64_t end,
               std::vector<Token>& out) {
  Token tok;
  tok.text = std::u32string(text.substr(start, end - start));
  tok.start = start;
  tok.end = end;
  tok.is_punct = std::all_of(tok.text.begin(), tok.text.end(),
                             [](char32_t cp) { return text::IsPunct(cp); });
  out.push_back(std::move(tok));
}

// Splits a non-space run into leading punctuation, a word core and trailing
// punctuation. Punctuation characters become single-code-point tokens.
void SplitRun(std::u32string_view text, int64_t start, int64_t end,
              std::vector<Token>& out) {
  int64_t lo = start;
  while (lo < end && text::IsPunct(text[lo])) {
    PushToken(text, lo, lo + 1, out);
    ++lo;
  }
  if (lo == end) return;
  int64_t hi = end;
  while (hi > lo && text::IsPunct(text[hi - 1])) --hi;
  PushToken(text, lo, hi, out);
  for (int64_t i = hi; i < end; ++i) PushToken(text, i, i + 1, out);
}

}  // namespace

std::string_view ModeName(TokenizerMode mode) {
  switch (mode) {
    case TokenizerMode::kSpaceDelimited:
      return "space";
    case TokenizerMode::kCjkChar:
      return "cjk";
    case TokenizerMode::kMixed:
      return "mixed";
  }
  return "mixed";
}

std::optional<TokenizerMode> ParseMode(std::string_view name) {
  if (name == "space" || name == "space-delimited") {
    return TokenizerMode::kSpaceDelimited;
  }
  if (name == "cjk" || name == "cjk-char") return TokenizerMode::kCjkChar;
  if (name == "mixed") return TokenizerMode::kMixed;
  return std::nullopt;
}

std::u32string_view TokenSpan::Gap(size_t i) const {
  const int64_t from = i == 0 ? 0 : tokens_[i - 1].end;
  const int64_t to =
      i < tokens_.size() ? tokens_[i].start
                         : static_cast<int64_t>(source_.size());
  return std::u32string_view(source_).substr(from, to - from);
}

std::u32string TokenSpan::Reassemble() const {
  std::u32string out;
  out.reserve(source_.size());
  for (size_t i = 0; i < tokens_.size(); ++i) {
    out += Gap(i);
    out += tokens_[i].text;
  }
  out += Gap(tokens_.size());
  return out;
}

TokenSpan Tokenize(std::u32string_view text, TokenizerPolicy policy) {
  std::vector<Token> tokens;
  const int64_t n = static_cast<int64_t>(text.size());
  int64_t i = 0;
  while (i < n) {
    if (text::IsSpace(text[i])) {
      ++i;
      continue;
    }
    int64_t run_end = i;
    while (run_end < n && !text::IsSpace(text[run_end])) ++run_end;
    switch (policy.mode) {
      case TokenizerMode::kSpaceDelimited:
        SplitRun(text, i, run_end, tokens);
        break;
      case TokenizerMode::kCjkChar:
        for (int64_t k = i; k < run_end; ++k) PushToken(text, k, k + 1, tokens);
        break;
      case TokenizerMode::kMixed: {
        int64_t k = i;
        while (k < run_end) {
          if (text::IsCjk(text[k])) {
            PushToken(text, k, k + 1, tokens);
            ++k;
            continue;
          }
          int64_t sub_end = k;
          while (sub_end < run_end && !text::IsCjk(text[sub_end])) ++sub_end;
          SplitRun(text, k, sub_end, tokens);
          k = sub_end;
        }
        break;
      }
    }
    i = run_end;
  }
  return TokenSpan(std::u32string(text), std::move(tokens));
}

TokenSpan Tokenize(std::string_view utf8, TokenizerPolicy policy) {
  return Tokenize(std::u32string_view(text::Decode(utf8)), policy);
}

Rewrite RewriteTokens(
    const TokenSpan& span,
    const std::vector<std::optional<std::u32string>>& replacements) {
  Rewrite out;
  const size_t n = span.size();
  out.new_start.resize(n);
  out.new_end.resize(n);
  for (size_t i = 0; i < n; ++i) {
    out.text += span.Gap(i);
    out.new_start[i] = static_cast<int64_t>(out.text.size());
    if (i < replacements.size() && replacements[i].has_value()) {
      out.text += *replacements[i];
    } else {
      out.text += span[i].text;
    }
    out.new_end[i] = static_cast<int64_t>(out.text.size());
  }
  out.text += span.Gap(n);
  return out;
}

std::pair<int64_t, int64_t> Rewrite::MapSpan(const TokenSpan& span,
                                             int64_t start,
                                             int64_t end) const {
  const auto& toks = span.tokens();
  // First token whose end lies beyond the position.
  auto map_start = [&](int64_t p) -> int64_t {
    auto it = std::upper_bound(
        toks.begin(), toks.end(), p,
        [](int64_t v, const Token& t) { return v < t.end; });
    const size_t i = static_cast<size_t>(it - toks.begin());
    if (i < toks.size() && toks[i].start <= p) return new_start[i];
    if (i == 0) return p;
    return new_end[i - 1] + (p - toks[i - 1].end);
  };
  // First token whose end is at or beyond the position.
  auto map_end = [&](int64_t p) -> int64_t {
    auto it = std::lower_bound(
        toks.begin(), toks.end(), p,
        [](const Token& t, int64_t v) { return t.end < v; });
    const size_t i = static_cast<size_t>(it - toks.begin());
    if (i < toks.size() && toks[i].start < p) return new_end[i];
    if (i == 0) return p;
    return new_end[i - 1] + (p - toks[i - 1].end);
  };
  return {map_start(start), map_end(end)};
}

}  // namespace xforge
