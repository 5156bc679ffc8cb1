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

// Code-point level text helpers. All offsets in the toolkit count Unicode
// code points; UTF-8 is the only external encoding.

#ifndef XFORGE_TEXT_H_
#define XFORGE_TEXT_H_

#include <string>
#include <string_view>

namespace xforge::text {

// Decodes UTF-8. Throws ParseError on invalid sequences.
std::u32string Decode(std::string_view utf8);
std::string Encode(std::u32string_view text);
void AppendUtf8(char32_t cp, std::string& out);

// Number of code points in a UTF-8 string.
size_t Length(std::string_view utf8);

bool IsSpace(char32_t cp);
// Han ideographs (including extensions and compatibility blocks), kana and
// bopomofo. Hangul is treated like an alphabetic script.
bool IsCjk(char32_t cp);
// ASCII punctuation plus the common Unicode punctuation blocks.
bool IsPunct(char32_t cp);

// Simple (one-to-one) lowercase mapping for Latin, Greek and Cyrillic.
char32_t FoldCase(char32_t cp);
std::u32string FoldCase(std::u32string_view text);
std::string FoldCase(std::string_view utf8);

// Replaces every run of whitespace by a single ' ' and trims both ends.
std::u32string CollapseSpaces(std::u32string_view text);

}  // namespace xforge::text

#endif  // XFORGE_TEXT_H_
