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

#include "xforge/metrics.h"

#include <cmath>
#include <limits>

#include "json.hpp"
#include "xforge/error.h"
#include "xforge/text.h"

namespace xforge {
namespace {

std::vector<std::u32string> NormalizedTokens(std::string_view s,
                                             LangClass lang) {
  std::u32string folded = text::FoldCase(std::u32string_view(text::Decode(s)));
  std::u32string no_punct;
  for (char32_t cp : folded) {
    if (!text::IsPunct(cp)) no_punct.push_back(cp);
  }
  std::vector<std::u32string> words;
  size_t i = 0;
  while (i < no_punct.size()) {
    if (text::IsSpace(no_punct[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < no_punct.size() && !text::IsSpace(no_punct[j])) ++j;
    words.emplace_back(no_punct.substr(i, j - i));
    i = j;
  }
  const bool drop_articles = lang != LangClass::kCjk;
  const bool split_cjk = lang != LangClass::kEnglishLike;
  std::vector<std::u32string> out;
  for (const std::u32string& w : words) {
    if (drop_articles && (w == U"a" || w == U"an" || w == U"the")) continue;
    if (!split_cjk) {
      out.push_back(w);
      continue;
    }
    std::u32string run;
    for (char32_t cp : w) {
      if (text::IsCjk(cp)) {
        if (!run.empty()) out.push_back(std::move(run));
        run.clear();
        out.emplace_back(1, cp);
      } else {
        run.push_back(cp);
      }
    }
    if (!run.empty()) out.push_back(std::move(run));
  }
  return out;
}

}  // namespace

std::optional<LangClass> ParseLangClass(std::string_view name) {
  if (name == "english" || name == "english-like" || name == "en") {
    return LangClass::kEnglishLike;
  }
  if (name == "cjk") return LangClass::kCjk;
  if (name == "mixed") return LangClass::kMixed;
  return std::nullopt;
}

std::string_view LangClassName(LangClass c) {
  switch (c) {
    case LangClass::kEnglishLike: return "english-like";
    case LangClass::kCjk: return "cjk";
    case LangClass::kMixed: return "mixed";
  }
  return "mixed";
}

std::string NormalizeAnswer(std::string_view s, LangClass lang) {
  std::u32string joined;
  for (const std::u32string& tok : NormalizedTokens(s, lang)) {
    if (!joined.empty()) joined.push_back(U' ');
    joined += tok;
  }
  return text::Encode(joined);
}

bool ExactMatch(std::string_view prediction, std::string_view gold,
                LangClass lang) {
  return NormalizeAnswer(prediction, lang) == NormalizeAnswer(gold, lang);
}

double TokenF1(std::string_view prediction, std::string_view gold,
               LangClass lang) {
  const auto pred = NormalizedTokens(prediction, lang);
  const auto ref = NormalizedTokens(gold, lang);
  if (pred.empty() || ref.empty()) return pred.empty() && ref.empty() ? 1.0 : 0.0;
  std::map<std::u32string, long> counts;
  for (const auto& t : ref) ++counts[t];
  long common = 0;
  for (const auto& t : pred) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision =
      static_cast<double>(common) / static_cast<double>(pred.size());
  const double recall =
      static_cast<double>(common) / static_cast<double>(ref.size());
  return 2.0 * precision * recall / (precision + recall);
}

MetricReport Evaluate(const std::map<std::string, std::string>& predictions,
                      const RcDataset& d, LangClass lang) {
  MetricReport report;
  double em_sum = 0.0;
  double f1_sum = 0.0;
  d.ForEachQa([&](size_t, size_t, const QaEntry& qa) {
    ExampleScore score;
    score.id = qa.id;
    score.noise = qa.noise_flag;
    if (qa.noise_flag) ++report.noise_count;
    auto it = predictions.find(qa.id);
    if (it == predictions.end()) {
      score.missing = true;
      report.missing_ids.push_back(qa.id);
    } else {
      for (const Answer& gold : qa.answers) {
        score.em = std::max(score.em,
                            ExactMatch(it->second, gold.text, lang) ? 1.0 : 0.0);
        score.f1 = std::max(score.f1, TokenF1(it->second, gold.text, lang));
      }
    }
    em_sum += score.em;
    f1_sum += score.f1;
    ++report.evaluated;
    report.examples.push_back(std::move(score));
  });
  if (report.evaluated > 0) {
    const auto n = static_cast<double>(report.evaluated);
    report.em = 100.0 * em_sum / n;
    report.f1 = 100.0 * f1_sum / n;
  }
  return report;
}

std::map<std::string, std::string> ParsePredictions(std::string_view bytes) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("predictions: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("predictions: expected object");
  std::map<std::string, std::string> out;
  for (const auto& [id, value] : root.items()) {
    if (!value.is_string()) {
      throw ParseError("predictions." + id + ": expected string");
    }
    out[id] = value.get<std::string>();
  }
  return out;
}

AnovaResult AnovaOneway(const std::vector<std::vector<double>>& groups) {
  const size_t k = groups.size();
  if (k < 2) throw ArgumentError("ANOVA needs at least two groups");
  size_t total = 0;
  double grand_sum = 0.0;
  AnovaResult r;
  for (const auto& g : groups) {
    if (g.empty()) throw ArgumentError("ANOVA group is empty");
    double sum = 0.0;
    for (double v : g) sum += v;
    r.group_means.push_back(sum / static_cast<double>(g.size()));
    grand_sum += sum;
    total += g.size();
  }
  if (total <= k) {
    throw ArgumentError("ANOVA needs more observations than groups");
  }
  const double grand_mean = grand_sum / static_cast<double>(total);
  for (size_t i = 0; i < k; ++i) {
    const double dm = r.group_means[i] - grand_mean;
    r.ss_between += static_cast<double>(groups[i].size()) * dm * dm;
    for (double v : groups[i]) {
      const double dv = v - r.group_means[i];
      r.ss_within += dv * dv;
    }
  }
  r.df_between = k - 1;
  r.df_within = total - k;
  // Sums of squares below this scale are rounding noise of the data.
  double scale = 0.0;
  for (const auto& g : groups) {
    for (double v : g) scale = std::max(scale, std::abs(v - grand_mean));
  }
  const double eps = 1e-24 * scale * scale * static_cast<double>(total);
  const bool between_zero = r.ss_between <= eps;
  const bool within_zero = r.ss_within <= eps;
  if (within_zero && between_zero) {
    r.status = AnovaResult::Status::kUndefined;
    r.f_statistic = std::numeric_limits<double>::quiet_NaN();
  } else if (within_zero) {
    r.status = AnovaResult::Status::kInfinite;
    r.f_statistic = std::numeric_limits<double>::infinity();
  } else {
    r.f_statistic = (r.ss_between / static_cast<double>(r.df_between)) /
                    (r.ss_within / static_cast<double>(r.df_within));
  }
  return r;
}

}  // namespace xforge
