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

#ifndef XFORGE_SPAN_RECOVERY_H_
#define XFORGE_SPAN_RECOVERY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xforge/dataset.h"

namespace xforge {

// Levenshtein distance over code points with unit costs.
int64_t EditDistance(std::u32string_view a, std::u32string_view b);
int64_t EditDistance(std::string_view a, std::string_view b);

struct SpanMatch {
  int64_t start = 0;  // code points into the searched context
  int64_t end = 0;
  int64_t distance = 0;
  std::string matched_text;

  bool operator==(const SpanMatch&) const = default;
};

// Finds the non-empty substring of `context` closest to `answer` in edit
// distance. Ties go to the shorter span, then to the start nearest
// `position_hint`, then to the leftmost start. O(|context| * |answer|).
//
// Throws NoMatchError for an empty context and ArgumentError for an empty
// answer.
SpanMatch BestSpanSearch(std::u32string_view context,
                         std::u32string_view answer,
                         int64_t position_hint = 0);
SpanMatch BestSpanSearch(std::string_view context, std::string_view answer,
                         int64_t position_hint = 0);

enum class RecoveryMode { kTrainDrop, kTestKeep };

struct RecoveryPolicy {
  int64_t cap = 10;
  RecoveryMode mode = RecoveryMode::kTrainDrop;

  // Largest accepted distance for an answer of `answer_length` code points:
  // min(cap, m - 1), never negative.
  int64_t Threshold(int64_t answer_length) const;
};

enum class RecoveryStatus { kRecovered, kNoise, kDropped };

struct RecoveryOutcome {
  RecoveryStatus status = RecoveryStatus::kDropped;
  // Set unless status is kDropped.
  std::optional<QaEntry> qa;
  // Best-effort match; absent when the translated answer was empty.
  std::optional<SpanMatch> match;
};

// Default hint: the answer's relative position in the source context scaled
// to the length of the new context.
int64_t ScaledHint(int64_t source_start, int64_t source_length,
                   int64_t new_length);

// Re-locates the answer of `qa` inside `new_context`. The returned qa has a
// single answer equal to the matched span and a "recover" lineage tag.
RecoveryOutcome RecoverExample(const QaEntry& qa, std::string_view new_context,
                               std::string_view translated_answer,
                               const RecoveryPolicy& policy,
                               int64_t position_hint);

// One row of a translated-triples file.
struct TranslationTriple {
  std::string id;
  std::string context;
  std::string question;
  std::string answer;
  std::string src_lang;
  std::string tgt_lang;
};

// Tab-separated: id, context, question, answer, src_lang, tgt_lang. Fields
// escape '\\', '\t', '\n' and '\r' with a backslash. A header row starting
// with "id\t" is skipped.
std::vector<TranslationTriple> ParseTriples(std::string_view bytes);
std::string SerializeTriples(const std::vector<TranslationTriple>& triples);

struct RecoveryStats {
  size_t recovered = 0;
  size_t noise = 0;
  size_t dropped = 0;
  size_t missing = 0;  // qa ids without a triple
  size_t exact = 0;    // recovered at distance 0
};

// Rebuilds `source` from translated triples. Qas of one source paragraph
// that share a translated context stay in one paragraph; diverging
// translations open new paragraphs in first-seen order. Qas without a
// triple are dropped and counted as missing.
RcDataset RecoverDataset(const RcDataset& source,
                         const std::vector<TranslationTriple>& triples,
                         const RecoveryPolicy& policy, RecoveryStats* stats);

}  // namespace xforge

#endif  // XFORGE_SPAN_RECOVERY_H_
