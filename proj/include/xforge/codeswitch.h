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

#ifndef XFORGE_CODESWITCH_H_
#define XFORGE_CODESWITCH_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xforge/dataset.h"
#include "xforge/tokenizer.h"

namespace xforge {

// Word-to-word lexicon. Keys are case-folded; each key holds its targets in
// file order.
struct BilingualDictionary {
  std::string source_lang;
  std::string target_lang;
  std::map<std::string, std::vector<std::string>> entries;

  // nullptr when the case-folded word is not a key.
  const std::vector<std::string>* Find(std::u32string_view word) const;
  bool empty() const { return entries.empty(); }
};

// MUSE format: one "source target" pair per line separated by whitespace.
// Blank lines are ignored; any other line without exactly two fields is a
// ParseError carrying the line number.
BilingualDictionary LoadDictionary(std::string_view bytes,
                                   std::string source_lang,
                                   std::string target_lang);

struct SubstitutionChoice {
  enum class Kind { kFirst, kSeeded };
  Kind kind = Kind::kFirst;
  uint64_t seed = 0;

  static SubstitutionChoice First() { return {}; }
  static SubstitutionChoice Seeded(uint64_t seed) {
    return {Kind::kSeeded, seed};
  }
};

struct Substitution {
  Rewrite rewrite;
  std::vector<bool> flags;  // one per token of the input span
  size_t word_tokens = 0;
  size_t substituted = 0;

  std::string Text() const;
};

// A word token is replaced iff its case-folded form is a dictionary key.
// Punctuation tokens and all gaps are kept verbatim.
Substitution SubstituteTokens(const TokenSpan& span,
                              const BilingualDictionary& dict,
                              SubstitutionChoice choice);

enum class SwitchScope { kContext, kQuestion, kBoth };

struct CodeSwitchReport {
  size_t total_word_tokens = 0;
  size_t substituted_tokens = 0;

  double ratio() const {
    return total_word_tokens == 0
               ? 0.0
               : static_cast<double>(substituted_tokens) /
                     static_cast<double>(total_word_tokens);
  }
};

// Substitutes in the fields selected by `scope`. Answers are re-derived from
// the substituted context. With a seeded choice each field draws from its own
// stream derived from (seed, field ordinal).
std::pair<RcDataset, CodeSwitchReport> CodeSwitchDataset(
    const RcDataset& d, const BilingualDictionary& dict, SwitchScope scope,
    SubstitutionChoice choice, TokenizerPolicy policy = {});

}  // namespace xforge

#endif  // XFORGE_CODESWITCH_H_
