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

#include "xforge/codeswitch.h"

#include <algorithm>

#include "xforge/error.h"
#include "xforge/random.h"
#include "xforge/text.h"

namespace xforge {

const std::vector<std::string>* BilingualDictionary::Find(
    std::u32string_view word) const {
  auto it = entries.find(text::Encode(text::FoldCase(word)));
  return it == entries.end() ? nullptr : &it->second;
}

BilingualDictionary LoadDictionary(std::string_view bytes,
                                   std::string source_lang,
                                   std::string target_lang) {
  BilingualDictionary dict;
  dict.source_lang = std::move(source_lang);
  dict.target_lang = std::move(target_lang);
  size_t line_no = 0;
  size_t from = 0;
  while (from < bytes.size()) {
    size_t nl = bytes.find('\n', from);
    if (nl == std::string_view::npos) nl = bytes.size();
    const std::u32string line = text::Decode(bytes.substr(from, nl - from));
    from = nl + 1;
    ++line_no;

    std::vector<std::u32string> fields;
    size_t i = 0;
    while (i < line.size()) {
      if (text::IsSpace(line[i])) {
        ++i;
        continue;
      }
      size_t j = i;
      while (j < line.size() && !text::IsSpace(line[j])) ++j;
      fields.emplace_back(line.substr(i, j - i));
      i = j;
    }
    if (fields.empty()) continue;
    if (fields.size() != 2) {
      throw ParseError("dictionary line " + std::to_string(line_no) +
                       ": expected 2 fields, found " +
                       std::to_string(fields.size()));
    }
    auto& targets = dict.entries[text::Encode(text::FoldCase(
        std::u32string_view(fields[0])))];
    std::string target = text::Encode(fields[1]);
    if (std::find(targets.begin(), targets.end(), target) == targets.end()) {
      targets.push_back(std::move(target));
    }
  }
  return dict;
}

std::string Substitution::Text() const { return text::Encode(rewrite.text); }

Substitution SubstituteTokens(const TokenSpan& span,
                              const BilingualDictionary& dict,
                              SubstitutionChoice choice) {
  Substitution out;
  out.flags.assign(span.size(), false);
  std::vector<std::optional<std::u32string>> replacements(span.size());
  Rng rng(choice.seed);
  for (size_t i = 0; i < span.size(); ++i) {
    if (span[i].is_punct) continue;
    ++out.word_tokens;
    const std::vector<std::string>* targets = dict.Find(span[i].text);
    if (targets == nullptr) continue;
    size_t pick = 0;
    if (choice.kind == SubstitutionChoice::Kind::kSeeded) {
      pick = static_cast<size_t>(rng.Below(targets->size()));
    }
    replacements[i] = text::Decode((*targets)[pick]);
    out.flags[i] = true;
    ++out.substituted;
  }
  out.rewrite = RewriteTokens(span, replacements);
  return out;
}

std::pair<RcDataset, CodeSwitchReport> CodeSwitchDataset(
    const RcDataset& d, const BilingualDictionary& dict, SwitchScope scope,
    SubstitutionChoice choice, TokenizerPolicy policy) {
  const bool do_context = scope != SwitchScope::kQuestion;
  const bool do_question = scope != SwitchScope::kContext;
  uint64_t field = 0;
  auto field_choice = [&]() {
    SubstitutionChoice c = choice;
    if (c.kind == SubstitutionChoice::Kind::kSeeded) {
      c.seed = MixSeed(choice.seed, field);
    }
    ++field;
    return c;
  };

  TransformTag tag;
  tag.op = "codeswitch";
  tag.params["dict"] = dict.source_lang + "-" + dict.target_lang;
  tag.params["scope"] = scope == SwitchScope::kContext    ? "context"
                        : scope == SwitchScope::kQuestion ? "question"
                                                          : "both";
  tag.params["choice"] =
      choice.kind == SubstitutionChoice::Kind::kFirst ? "first" : "seeded";
  if (choice.kind == SubstitutionChoice::Kind::kSeeded) {
    tag.params["seed"] = std::to_string(choice.seed);
  }

  CodeSwitchReport report;
  RcDataset out;
  out.version = d.version;
  for (const Article& article : d.articles) {
    Article na;
    na.title = article.title;
    for (const Paragraph& para : article.paragraphs) {
      Paragraph np;
      np.context = para.context;
      const TokenSpan span = Tokenize(std::string_view(para.context), policy);
      std::optional<Substitution> sub;
      if (do_context) {
        sub = SubstituteTokens(span, dict, field_choice());
        report.total_word_tokens += sub->word_tokens;
        report.substituted_tokens += sub->substituted;
        np.context = sub->Text();
      }
      for (const QaEntry& qa : para.qas) {
        QaEntry nq = qa;
        if (do_question) {
          const Substitution q = SubstituteTokens(
              Tokenize(std::string_view(qa.question), policy), dict,
              field_choice());
          report.total_word_tokens += q.word_tokens;
          report.substituted_tokens += q.substituted;
          nq.question = q.Text();
        }
        if (sub.has_value()) {
          for (Answer& ans : nq.answers) {
            const int64_t end = ans.answer_start +
                                static_cast<int64_t>(text::Length(ans.text));
            const auto [s, e] =
                sub->rewrite.MapSpan(span, ans.answer_start, end);
            ans.answer_start = s;
            ans.text = text::Encode(
                std::u32string_view(sub->rewrite.text).substr(s, e - s));
          }
        }
        if (!dict.empty()) nq.lineage.push_back(tag);
        np.qas.push_back(std::move(nq));
      }
      na.paragraphs.push_back(std::move(np));
    }
    out.articles.push_back(std::move(na));
  }
  return {std::move(out), report};
}

}  // namespace xforge
