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

#ifndef XFORGE_TYPOLOGY_H_
#define XFORGE_TYPOLOGY_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xforge/dataset.h"
#include "xforge/span_recovery.h"

namespace xforge {

struct DepToken {
  int index = 0;  // 1-based
  std::string form;
  int head = 0;   // 0 for the root
  std::string deprel;
};

struct DepSentence {
  std::vector<DepToken> tokens;
};

// Reads CoNLL-U. Comment lines, multiword-token ranges ("3-4") and empty
// nodes ("5.1") are skipped; only ID, FORM, HEAD and DEPREL are used.
// Throws ParseError for malformed lines and StructureError (with the 1-based
// sentence number) when a sentence is not a tree.
std::vector<DepSentence> ParseConllu(std::string_view bytes);

// Throws StructureError unless `s` is a single-rooted tree with in-range
// heads and consecutive ids.
void ValidateTree(const DepSentence& s, size_t sentence_number = 1);

enum class OrderPattern { kSVO, kSOV, kVOS, kVSO, kOSV, kOVS };

inline constexpr std::array<OrderPattern, 6> kAllPatterns = {
    OrderPattern::kSVO, OrderPattern::kSOV, OrderPattern::kVOS,
    OrderPattern::kVSO, OrderPattern::kOSV, OrderPattern::kOVS};

std::string_view PatternName(OrderPattern p);
// Case-insensitive "svo", "SOV", ...
std::optional<OrderPattern> ParsePattern(std::string_view name);

bool IsSubjectRelation(std::string_view deprel);
bool IsObjectRelation(std::string_view deprel);

// Greedy top-down re-linearization. At a head with subject or object
// dependents the output is the S, V and O blocks in pattern order, where V
// holds the head and its other dependents in original order. Every subtree
// stays contiguous. Subtrees that are non-projective in the input keep their
// original token order. A sentence-final "punct" attached to the root stays
// last. Returns 1-based token indices.
std::vector<int> RelinearizeSentence(const DepSentence& s, OrderPattern p);

struct ReorderStats {
  size_t sentences = 0;
  size_t changed_sentences = 0;
  size_t recovered = 0;
  size_t exact = 0;
  size_t noise = 0;
  size_t dropped = 0;
};

// `parses` are consumed in dataset order: for each paragraph the sentences
// of its context, then the sentences of each question. A text is covered by
// consecutive sentences whose forms appear in it separated only by
// whitespace. Rebuilt texts join tokens with single spaces and answers are
// re-located with the span search, subject to `policy`.
RcDataset ReorderDataset(const RcDataset& d,
                         const std::vector<DepSentence>& parses,
                         OrderPattern pattern, const RecoveryPolicy& policy,
                         ReorderStats* stats = nullptr);

}  // namespace xforge

#endif  // XFORGE_TYPOLOGY_H_
