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

#include "xforge/span_recovery.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "xforge/error.h"
#include "xforge/text.h"
#include "xforge/tsv.h"

namespace xforge {

int64_t EditDistance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<int64_t> row(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) row[j] = static_cast<int64_t>(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    int64_t diag = row[0];
    row[0] = static_cast<int64_t>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      const int64_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

int64_t EditDistance(std::string_view a, std::string_view b) {
  return EditDistance(std::u32string_view(text::Decode(a)),
                      std::u32string_view(text::Decode(b)));
}

SpanMatch BestSpanSearch(std::u32string_view context,
                         std::u32string_view answer, int64_t position_hint) {
  if (context.empty()) throw NoMatchError("cannot search an empty context");
  if (answer.empty()) throw ArgumentError("answer must be non-empty");
  const int64_t n = static_cast<int64_t>(context.size());
  const int64_t m = static_cast<int64_t>(answer.size());

  // cost[j]: best alignment of the answer prefix with a context substring
  // ending at j. start[j]: the largest start among those optimal alignments.
  std::vector<int64_t> cost(n + 1, 0), next_cost(n + 1);
  std::vector<int64_t> start(n + 1), next_start(n + 1);
  for (int64_t j = 0; j <= n; ++j) start[j] = j;

  for (int64_t i = 1; i <= m; ++i) {
    next_cost[0] = i;
    next_start[0] = 0;
    for (int64_t j = 1; j <= n; ++j) {
      const int64_t diag =
          cost[j - 1] + (answer[i - 1] == context[j - 1] ? 0 : 1);
      const int64_t up = cost[j] + 1;
      const int64_t left = next_cost[j - 1] + 1;
      const int64_t best = std::min({diag, up, left});
      int64_t s = -1;
      if (diag == best) s = std::max(s, start[j - 1]);
      if (up == best) s = std::max(s, start[j]);
      if (left == best) s = std::max(s, next_start[j - 1]);
      next_cost[j] = best;
      next_start[j] = s;
    }
    std::swap(cost, next_cost);
    std::swap(start, next_start);
  }

  const int64_t best_distance = *std::min_element(cost.begin(), cost.end());
  SpanMatch match;
  match.distance = best_distance;
  if (best_distance == m) {
    // No code point of the answer occurs in the context: every single code
    // point costs m, so the shortest spans are the length-1 ones.
    match.start = std::clamp<int64_t>(position_hint, 0, n - 1);
    match.end = match.start + 1;
  } else {
    int64_t best_len = std::numeric_limits<int64_t>::max();
    int64_t best_gap = std::numeric_limits<int64_t>::max();
    for (int64_t j = 1; j <= n; ++j) {
      if (cost[j] != best_distance) continue;
      const int64_t len = j - start[j];
      const int64_t gap = std::abs(start[j] - position_hint);
      const bool better =
          len < best_len || (len == best_len && gap < best_gap) ||
          (len == best_len && gap == best_gap && start[j] < match.start);
      if (better) {
        best_len = len;
        best_gap = gap;
        match.start = start[j];
        match.end = j;
      }
    }
  }
  match.matched_text =
      text::Encode(context.substr(match.start, match.end - match.start));
  return match;
}

SpanMatch BestSpanSearch(std::string_view context, std::string_view answer,
                         int64_t position_hint) {
  return BestSpanSearch(std::u32string_view(text::Decode(context)),
                        std::u32string_view(text::Decode(answer)),
                        position_hint);
}

int64_t RecoveryPolicy::Threshold(int64_t answer_length) const {
  return std::max<int64_t>(0, std::min(cap, answer_length - 1));
}

int64_t ScaledHint(int64_t source_start, int64_t source_length,
                   int64_t new_length) {
  if (source_length <= 0) return 0;
  return static_cast<int64_t>(std::llround(
      static_cast<double>(source_start) / static_cast<double>(source_length) *
      static_cast<double>(new_length)));
}

RecoveryOutcome RecoverExample(const QaEntry& qa, std::string_view new_context,
                               std::string_view translated_answer,
                               const RecoveryPolicy& policy,
                               int64_t position_hint) {
  const std::u32string context = text::Decode(new_context);
  const std::u32string answer = text::Decode(translated_answer);
  if (context.empty()) throw NoMatchError("qa \"" + qa.id + "\": empty context");

  RecoveryOutcome outcome;
  TransformTag tag;
  tag.op = "recover";
  tag.params["cap"] = std::to_string(policy.cap);
  tag.params["mode"] =
      policy.mode == RecoveryMode::kTrainDrop ? "train" : "test";

  bool accepted = false;
  if (!answer.empty()) {
    outcome.match = BestSpanSearch(context, answer, position_hint);
    tag.params["distance"] = std::to_string(outcome.match->distance);
    accepted = outcome.match->distance <=
               policy.Threshold(static_cast<int64_t>(answer.size()));
  } else {
    tag.params["distance"] = "none";
  }

  if (!accepted && policy.mode == RecoveryMode::kTrainDrop) {
    outcome.status = RecoveryStatus::kDropped;
    return outcome;
  }
  QaEntry out = qa;
  out.answers.clear();
  if (outcome.match.has_value()) {
    out.answers.push_back({outcome.match->matched_text, outcome.match->start});
  }
  out.noise_flag = !accepted;
  tag.params["status"] = accepted ? "recovered" : "noise";
  out.lineage.push_back(std::move(tag));
  outcome.status = accepted ? RecoveryStatus::kRecovered : RecoveryStatus::kNoise;
  outcome.qa = std::move(out);
  return outcome;
}

std::vector<TranslationTriple> ParseTriples(std::string_view bytes) {
  std::vector<TranslationTriple> out;
  const auto lines = tsv::SplitLines(bytes);
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.empty()) continue;
    if (i == 0 && line.starts_with("id\t")) continue;
    const auto fields = tsv::SplitFields(line);
    if (fields.size() != 6) {
      throw ParseError("triples line " + std::to_string(i + 1) +
                       ": expected 6 fields, found " +
                       std::to_string(fields.size()));
    }
    try {
      out.push_back({tsv::Unescape(fields[0]), tsv::Unescape(fields[1]),
                     tsv::Unescape(fields[2]), tsv::Unescape(fields[3]),
                     tsv::Unescape(fields[4]), tsv::Unescape(fields[5])});
    } catch (const ParseError& e) {
      throw ParseError("triples line " + std::to_string(i + 1) + ": " +
                       e.what());
    }
  }
  return out;
}

std::string SerializeTriples(const std::vector<TranslationTriple>& triples) {
  std::string out = "id\tcontext\tquestion\tanswer\tsrc_lang\ttgt_lang\n";
  for (const TranslationTriple& t : triples) {
    out += tsv::Escape(t.id) + '\t' + tsv::Escape(t.context) + '\t' +
           tsv::Escape(t.question) + '\t' + tsv::Escape(t.answer) + '\t' +
           tsv::Escape(t.src_lang) + '\t' + tsv::Escape(t.tgt_lang) + '\n';
  }
  return out;
}

RcDataset RecoverDataset(const RcDataset& source,
                         const std::vector<TranslationTriple>& triples,
                         const RecoveryPolicy& policy, RecoveryStats* stats) {
  std::unordered_map<std::string, const TranslationTriple*> by_id;
  for (const TranslationTriple& t : triples) {
    if (!by_id.emplace(t.id, &t).second) {
      throw ArgumentError("duplicate triple for qa \"" + t.id + "\"");
    }
  }
  RecoveryStats local;
  RcDataset out;
  out.version = source.version;
  for (const Article& article : source.articles) {
    Article na;
    na.title = article.title;
    for (const Paragraph& para : article.paragraphs) {
      const int64_t source_length =
          static_cast<int64_t>(text::Length(para.context));
      const size_t first_new = na.paragraphs.size();
      for (const QaEntry& qa : para.qas) {
        auto it = by_id.find(qa.id);
        if (it == by_id.end()) {
          ++local.missing;
          continue;
        }
        const TranslationTriple& t = *it->second;
        if (t.context.empty()) {
          ++local.dropped;
          continue;
        }
        int64_t hint = 0;
        if (!qa.answers.empty()) {
          hint = ScaledHint(qa.answers.front().answer_start, source_length,
                            static_cast<int64_t>(text::Length(t.context)));
        }
        QaEntry translated = qa;
        translated.question = t.question;
        RecoveryOutcome outcome =
            RecoverExample(translated, t.context, t.answer, policy, hint);
        switch (outcome.status) {
          case RecoveryStatus::kDropped:
            ++local.dropped;
            continue;
          case RecoveryStatus::kNoise:
            ++local.noise;
            break;
          case RecoveryStatus::kRecovered:
            ++local.recovered;
            if (outcome.match && outcome.match->distance == 0) ++local.exact;
            break;
        }
        auto target = std::find_if(
            na.paragraphs.begin() + static_cast<std::ptrdiff_t>(first_new),
            na.paragraphs.end(),
            [&](const Paragraph& p) { return p.context == t.context; });
        if (target == na.paragraphs.end()) {
          na.paragraphs.push_back({t.context, {}});
          target = na.paragraphs.end() - 1;
        }
        target->qas.push_back(std::move(*outcome.qa));
      }
    }
    if (!na.paragraphs.empty()) out.articles.push_back(std::move(na));
  }
  if (stats != nullptr) *stats = local;
  return out;
}

}  // namespace xforge
