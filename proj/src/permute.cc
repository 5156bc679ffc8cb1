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

#include "xforge/permute.h"

#include <algorithm>
#include <set>

#include "xforge/digest.h"
#include "xforge/error.h"
#include "xforge/random.h"
#include "xforge/text.h"
#include "xforge/tsv.h"

namespace xforge {
namespace {

bool IsCjkType(const std::string& word, TokenizerPolicy policy) {
  if (policy.mode != TokenizerMode::kMixed) return false;
  const std::u32string cps = text::Decode(word);
  return cps.size() == 1 && text::IsCjk(cps[0]);
}

std::string TableDigest(const PermutationTable& table) {
  return Sha256Hex(table.ToTsv()).substr(0, 16);
}

// Returns std::nullopt for tokens that stay (punctuation) and throws for
// unknown words.
std::vector<std::optional<std::u32string>> Images(
    const TokenSpan& span, const PermutationTable& table) {
  std::vector<std::optional<std::u32string>> out(span.size());
  for (size_t i = 0; i < span.size(); ++i) {
    if (span[i].is_punct) continue;
    const std::string word = text::Encode(span[i].text);
    const std::string* image = table.Lookup(word);
    if (image == nullptr) {
      throw CoverageError("token \"" + word +
                          "\" is not in the permutation vocabulary");
    }
    out[i] = text::Decode(*image);
  }
  return out;
}

}  // namespace

std::vector<std::string> BuildVocab(const RcDataset& d,
                                    TokenizerPolicy policy) {
  std::set<std::string> types;
  auto add = [&](const std::string& s) {
    const TokenSpan span = Tokenize(std::string_view(s), policy);
    for (const Token& tok : span.tokens()) {
      if (!tok.is_punct) types.insert(text::Encode(tok.text));
    }
  };
  for (const Article& article : d.articles) {
    for (const Paragraph& para : article.paragraphs) {
      add(para.context);
      for (const QaEntry& qa : para.qas) add(qa.question);
    }
  }
  return {types.begin(), types.end()};
}

PermutationTable::PermutationTable(std::vector<std::string> vocabulary,
                                   std::vector<std::string> images,
                                   int64_t seed, TokenizerPolicy policy,
                                   bool derangement_required)
    : vocabulary_(std::move(vocabulary)),
      images_(std::move(images)),
      seed_(seed),
      policy_(policy),
      derangement_required_(derangement_required) {
  if (vocabulary_.size() != images_.size()) {
    throw ArgumentError("permutation vocabulary and images differ in size");
  }
  std::set<std::string> seen_images;
  for (size_t i = 0; i < vocabulary_.size(); ++i) {
    if (!sigma_.emplace(vocabulary_[i], images_[i]).second) {
      throw ArgumentError("duplicate permutation source \"" + vocabulary_[i] +
                          "\"");
    }
    seen_images.insert(images_[i]);
  }
  for (const std::string& image : images_) {
    if (!sigma_.contains(image)) {
      throw ArgumentError("permutation image \"" + image +
                          "\" is not in the vocabulary");
    }
  }
  if (seen_images.size() != images_.size()) {
    throw ArgumentError("permutation is not a bijection");
  }
}

const std::string* PermutationTable::Lookup(const std::string& word) const {
  auto it = sigma_.find(word);
  return it == sigma_.end() ? nullptr : &it->second;
}

size_t PermutationTable::FixedPoints() const {
  size_t count = 0;
  for (size_t i = 0; i < vocabulary_.size(); ++i) {
    if (vocabulary_[i] == images_[i]) ++count;
  }
  return count;
}

PermutationTable PermutationTable::Inverse() const {
  std::map<std::string, std::string> inverse;
  for (size_t i = 0; i < vocabulary_.size(); ++i) {
    inverse[images_[i]] = vocabulary_[i];
  }
  std::vector<std::string> images;
  images.reserve(vocabulary_.size());
  for (const std::string& w : vocabulary_) images.push_back(inverse.at(w));
  return PermutationTable(vocabulary_, std::move(images), seed_, policy_,
                          derangement_required_);
}

std::string PermutationTable::ToTsv() const {
  std::string out;
  for (size_t i = 0; i < vocabulary_.size(); ++i) {
    out += tsv::Escape(vocabulary_[i]) + '\t' + tsv::Escape(images_[i]) + '\n';
  }
  return out;
}

PermutationTable PermutationTable::FromTsv(std::string_view bytes,
                                           TokenizerPolicy policy) {
  std::vector<std::string> vocab, images;
  const auto lines = tsv::SplitLines(bytes);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = tsv::SplitFields(lines[i]);
    if (fields.size() != 2) {
      throw ParseError("permutation table line " + std::to_string(i + 1) +
                       ": expected 2 fields");
    }
    vocab.push_back(tsv::Unescape(fields[0]));
    images.push_back(tsv::Unescape(fields[1]));
  }
  return PermutationTable(std::move(vocab), std::move(images), kIdentitySeed,
                          policy, false);
}

PermutationTable BuildPermutation(std::vector<std::string> vocab,
                                  int64_t seed, bool derangement,
                                  TokenizerPolicy policy) {
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());

  // Classes permute independently; see PermutationTable.
  std::vector<size_t> cjk, other;
  for (size_t i = 0; i < vocab.size(); ++i) {
    (IsCjkType(vocab[i], policy) ? cjk : other).push_back(i);
  }
  if (derangement) {
    for (const auto* cls : {&cjk, &other}) {
      if (cls->size() == 1) {
        throw ArgumentError("cannot derange a single word type \"" +
                            vocab[cls->front()] + "\"");
      }
    }
    if (seed == PermutationTable::kIdentitySeed && !vocab.empty()) {
      throw ArgumentError("the identity seed cannot produce a derangement");
    }
  }

  std::vector<std::string> images = vocab;
  if (seed != PermutationTable::kIdentitySeed) {
    Rng rng(static_cast<uint64_t>(seed));
    for (const auto* cls : {&cjk, &other}) {
      std::vector<size_t> targets = *cls;
      while (true) {
        rng.Shuffle(targets);
        bool fixed = false;
        for (size_t k = 0; k < cls->size(); ++k) {
          fixed = fixed || targets[k] == (*cls)[k];
        }
        if (!derangement || !fixed) break;
      }
      for (size_t k = 0; k < cls->size(); ++k) {
        images[(*cls)[k]] = vocab[targets[k]];
      }
    }
  }
  return PermutationTable(std::move(vocab), std::move(images), seed, policy,
                          derangement);
}

RcDataset ApplyPermutation(const RcDataset& d, const PermutationTable& table) {
  const TokenizerPolicy policy = table.policy();
  const std::string digest = TableDigest(table);
  const std::string inverse_digest = TableDigest(table.Inverse());
  const bool identity = table.FixedPoints() == table.vocabulary().size();

  auto permute_text = [&](const std::string& s) {
    const TokenSpan span = Tokenize(std::string_view(s), policy);
    return text::Encode(RewriteTokens(span, Images(span, table)).text);
  };

  RcDataset out;
  out.version = d.version;
  for (const Article& article : d.articles) {
    Article na;
    na.title = article.title;
    for (const Paragraph& para : article.paragraphs) {
      const TokenSpan span = Tokenize(std::string_view(para.context), policy);
      const Rewrite rewrite = RewriteTokens(span, Images(span, table));
      Paragraph np;
      np.context = text::Encode(rewrite.text);
      for (const QaEntry& qa : para.qas) {
        QaEntry nq = qa;
        nq.question = permute_text(qa.question);
        for (Answer& ans : nq.answers) {
          const int64_t end = ans.answer_start +
                              static_cast<int64_t>(text::Length(ans.text));
          const auto [s, e] = rewrite.MapSpan(span, ans.answer_start, end);
          ans.answer_start = s;
          ans.text = text::Encode(
              std::u32string_view(rewrite.text).substr(s, e - s));
        }
        // Applying the inverse of the most recent permutation undoes it, so
        // its lineage entry is removed instead of stacking a second one.
        if (identity) {
          // no-op mapping, nothing to record
        } else if (!nq.lineage.empty() && nq.lineage.back().op == "permute" &&
            nq.lineage.back().params["table"] == inverse_digest) {
          nq.lineage.pop_back();
        } else {
          TransformTag tag;
          tag.op = "permute";
          tag.params["policy"] = std::string(ModeName(policy.mode));
          tag.params["seed"] = std::to_string(table.seed());
          tag.params["table"] = digest;
          nq.lineage.push_back(std::move(tag));
        }
        np.qas.push_back(std::move(nq));
      }
      na.paragraphs.push_back(std::move(np));
    }
    out.articles.push_back(std::move(na));
  }
  return out;
}

}  // namespace xforge
