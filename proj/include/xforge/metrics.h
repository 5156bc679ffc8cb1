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

#ifndef XFORGE_METRICS_H_
#define XFORGE_METRICS_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xforge/dataset.h"

namespace xforge {

enum class LangClass { kEnglishLike, kCjk, kMixed };

std::optional<LangClass> ParseLangClass(std::string_view name);
std::string_view LangClassName(LangClass c);

// SQuAD-style normalization: lowercase, drop punctuation, drop the articles
// a/an/the (english-like and mixed), split CJK code points into single
// units (cjk and mixed), and join with single spaces.
std::string NormalizeAnswer(std::string_view text, LangClass lang);

// Bag-of-tokens F1 with multiplicity over normalized tokens.
double TokenF1(std::string_view prediction, std::string_view gold,
               LangClass lang);

bool ExactMatch(std::string_view prediction, std::string_view gold,
                LangClass lang);

struct ExampleScore {
  std::string id;
  double em = 0.0;  // 0 or 1
  double f1 = 0.0;
  bool noise = false;
  bool missing = false;
};

struct MetricReport {
  double em = 0.0;  // percentages
  double f1 = 0.0;
  size_t evaluated = 0;
  size_t noise_count = 0;
  std::vector<std::string> missing_ids;
  std::vector<ExampleScore> examples;
};

// Scores every qa of `d`. Noise-flagged qas count with their best-effort
// golds; qas without a prediction score zero and are listed as missing.
MetricReport Evaluate(const std::map<std::string, std::string>& predictions,
                      const RcDataset& d, LangClass lang);

// Official predictions layout: a JSON object mapping qa id to answer text.
std::map<std::string, std::string> ParsePredictions(std::string_view bytes);

struct AnovaResult {
  enum class Status { kFinite, kInfinite, kUndefined };

  // +inf for kInfinite, NaN for kUndefined.
  double f_statistic = 0.0;
  Status status = Status::kFinite;
  double ss_between = 0.0;
  double ss_within = 0.0;
  size_t df_between = 0;
  size_t df_within = 0;
  std::vector<double> group_means;
};

// One-way ANOVA. Needs at least two groups, no empty group, and more
// observations than groups; throws ArgumentError otherwise.
AnovaResult AnovaOneway(const std::vector<std::vector<double>>& groups);

}  // namespace xforge

#endif  // XFORGE_METRICS_H_
