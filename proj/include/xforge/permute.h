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

#ifndef XFORGE_PERMUTE_H_
#define XFORGE_PERMUTE_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "xforge/dataset.h"
#include "xforge/tokenizer.h"

namespace xforge {

// Sorted, de-duplicated word types of every context and question.
// Punctuation tokens are excluded.
std::vector<std::string> BuildVocab(const RcDataset& d,
                                    TokenizerPolicy policy);

// A bijection over a vocabulary. Under the mixed policy CJK types map to
// CJK types and other types to other types, so permuted text tokenizes into
// the same token boundaries.
class PermutationTable {
 public:
  // Seed value that requests the identity mapping.
  static constexpr int64_t kIdentitySeed = -1;

  PermutationTable() = default;
  PermutationTable(std::vector<std::string> vocabulary,
                   std::vector<std::string> images, int64_t seed,
                   TokenizerPolicy policy, bool derangement_required);

  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const std::vector<std::string>& images() const { return images_; }
  int64_t seed() const { return seed_; }
  TokenizerPolicy policy() const { return policy_; }
  bool derangement_required() const { return derangement_required_; }

  // nullptr for an unknown word.
  const std::string* Lookup(const std::string& word) const;
  size_t FixedPoints() const;
  PermutationTable Inverse() const;

  // Two columns, source and image, one line per type in vocabulary order.
  std::string ToTsv() const;
  static PermutationTable FromTsv(std::string_view bytes,
                                  TokenizerPolicy policy);

 private:
  std::vector<std::string> vocabulary_;
  std::vector<std::string> images_;
  std::map<std::string, std::string> sigma_;
  int64_t seed_ = kIdentitySeed;
  TokenizerPolicy policy_;
  bool derangement_required_ = false;
};

// Seeded Fisher-Yates shuffle; with `derangement`, reshuffles until no type
// maps to itself. Throws ArgumentError when a derangement is impossible.
PermutationTable BuildPermutation(std::vector<std::string> vocab,
                                  int64_t seed, bool derangement,
                                  TokenizerPolicy policy = {});

// Replaces every word token of contexts and questions by its image and
// recomputes answer offsets. Throws CoverageError on an unknown token.
RcDataset ApplyPermutation(const RcDataset& d, const PermutationTable& table);

}  // namespace xforge

#endif  // XFORGE_PERMUTE_H_
