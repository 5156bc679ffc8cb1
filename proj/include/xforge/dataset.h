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

// SQuAD v1.1 data model. Offsets count Unicode code points.

#ifndef XFORGE_DATASET_H_
#define XFORGE_DATASET_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace xforge {

// One transform applied to a qa entry, e.g. {"permute", {"seed": "7"}}.
struct TransformTag {
  std::string op;
  std::map<std::string, std::string> params;

  bool operator==(const TransformTag&) const = default;
};

struct Answer {
  std::string text;
  int64_t answer_start = 0;

  bool operator==(const Answer&) const = default;
};

struct QaEntry {
  std::string id;
  std::string question;
  std::vector<Answer> answers;
  std::vector<TransformTag> lineage;
  bool noise_flag = false;

  bool operator==(const QaEntry&) const = default;
};

struct Paragraph {
  std::string context;
  std::vector<QaEntry> qas;

  bool operator==(const Paragraph&) const = default;
};

struct Article {
  std::string title;
  std::vector<Paragraph> paragraphs;

  bool operator==(const Article&) const = default;
};

struct RcDataset {
  std::string version = "1.1";
  std::vector<Article> articles;

  bool operator==(const RcDataset&) const = default;

  size_t QaCount() const;

  // Calls fn(article_index, paragraph_index, qa) for every qa in order.
  template <typename Fn>
  void ForEachQa(Fn&& fn) const {
    for (size_t a = 0; a < articles.size(); ++a) {
      for (size_t p = 0; p < articles[a].paragraphs.size(); ++p) {
        for (const QaEntry& qa : articles[a].paragraphs[p].qas) fn(a, p, qa);
      }
    }
  }
};

// Throws IntegrityError naming the first offending qa id.
void ValidateDataset(const RcDataset& d);

// Throws ParseError (with a JSON path) or IntegrityError.
RcDataset ParseDataset(std::string_view bytes);

// Compact UTF-8 JSON. Lineage and noise_flag go into a per-qa "xforge"
// object that is omitted when both are empty.
std::string SerializeDataset(const RcDataset& d);

// Uniform sample of `target_qa_count` qa entries without replacement,
// keeping document order. Empty paragraphs and articles are removed.
RcDataset Downsample(const RcDataset& d, size_t target_qa_count,
                     uint64_t seed);

// Removes paragraphs without qas and articles without paragraphs.
void PruneEmpty(RcDataset& d);

}  // namespace xforge

#endif  // XFORGE_DATASET_H_
