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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "xforge/codeswitch.h"
#include "xforge/dataset.h"
#include "xforge/error.h"
#include "xforge/manifest.h"
#include "xforge/metrics.h"
#include "xforge/permute.h"
#include "xforge/repr.h"
#include "xforge/span_recovery.h"
#include "xforge/text.h"
#include "xforge/tokenizer.h"
#include "xforge/typology.h"

namespace py = pybind11;
using namespace xforge;

namespace {

TokenizerPolicy Policy(const std::string& name) {
  const auto mode = ParseMode(name);
  if (!mode) throw ArgumentError("unknown tokenizer mode \"" + name + "\"");
  return {*mode};
}

LangClass Lang(const std::string& name) {
  const auto lang = ParseLangClass(name);
  if (!lang) throw ArgumentError("unknown language class \"" + name + "\"");
  return *lang;
}

OrderPattern Pattern(const std::string& name) {
  const auto p = ParsePattern(name);
  if (!p) throw ArgumentError("unknown pattern \"" + name + "\"");
  return *p;
}

RecoveryPolicy Recovery(const std::string& mode, int64_t cap) {
  if (mode != "train" && mode != "test") {
    throw ArgumentError("mode must be train or test");
  }
  return {cap, mode == "train" ? RecoveryMode::kTrainDrop : RecoveryMode::kTestKeep};
}

py::dict Match(const SpanMatch& m) {
  py::dict d;
  d["start"] = m.start;
  d["end"] = m.end;
  d["distance"] = m.distance;
  d["text"] = m.matched_text;
  return d;
}

std::vector<RowMeta> MetaFrom(const std::vector<py::dict>& rows) {
  std::vector<RowMeta> out;
  for (const py::dict& r : rows) {
    out.push_back({r["example_id"].cast<std::string>(),
                   r["token_index"].cast<int64_t>(),
                   r["token_text"].cast<std::string>(),
                   r["in_answer_span"].cast<bool>(),
                   r["language"].cast<std::string>()});
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_xforge, m) {
  m.doc() = "Bindings for the xforge corpus forging and analysis core";
  m.attr("__version__") = std::string(kToolkitVersion);

  static py::exception<Error> error(m, "Error", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), (std::string(e.kind()) + ": " + e.what()).c_str());
    }
  });

  // Text and spans.
  m.def("tokenize", [](const std::string& s, const std::string& mode) {
    const TokenSpan span = Tokenize(std::string_view(s), Policy(mode));
    std::vector<py::tuple> out;
    for (size_t i = 0; i < span.size(); ++i) {
      out.push_back(py::make_tuple(text::Encode(span[i].text), span[i].start,
                                   span[i].end, span[i].is_punct));
    }
    return out;
  }, py::arg("text"), py::arg("mode") = "mixed");
  m.def("edit_distance", [](const std::string& a, const std::string& b) {
    return EditDistance(std::string_view(a), std::string_view(b));
  });
  m.def("best_span_search", [](const std::string& context, const std::string& answer,
                               int64_t hint) {
    return Match(BestSpanSearch(std::string_view(context), std::string_view(answer), hint));
  }, py::arg("context"), py::arg("answer"), py::arg("hint") = 0);
  m.def("threshold", [](int64_t m, int64_t cap) { return RecoveryPolicy{cap}.Threshold(m); },
        py::arg("answer_length"), py::arg("cap") = 10);

  // Dataset transforms. Datasets cross the boundary as SQuAD JSON text.
  m.def("validate_dataset", [](const std::string& json) {
    ValidateDataset(ParseDataset(json));
  });
  m.def("downsample", [](const std::string& json, size_t target, uint64_t seed) {
    return SerializeDataset(Downsample(ParseDataset(json), target, seed));
  }, py::arg("dataset"), py::arg("target"), py::arg("seed") = 0);
  m.def("recover", [](const std::string& json, const std::string& triples,
                      const std::string& mode, int64_t cap) {
    RecoveryStats stats;
    RcDataset out = RecoverDataset(ParseDataset(json), ParseTriples(triples),
                                   Recovery(mode, cap), &stats);
    py::dict counts;
    counts["recovered"] = stats.recovered;
    counts["exact"] = stats.exact;
    counts["noise"] = stats.noise;
    counts["dropped"] = stats.dropped;
    counts["missing"] = stats.missing;
    return py::make_tuple(SerializeDataset(out), counts);
  }, py::arg("dataset"), py::arg("triples"), py::arg("mode") = "train",
     py::arg("cap") = 10);
  m.def("permute", [](const std::string& json, int64_t seed, const std::string& policy,
                      bool allow_fixed_points) {
    const RcDataset d = ParseDataset(json);
    const TokenizerPolicy p = Policy(policy);
    const PermutationTable t = BuildPermutation(BuildVocab(d, p), seed, !allow_fixed_points, p);
    return py::make_tuple(SerializeDataset(ApplyPermutation(d, t)), t.ToTsv());
  }, py::arg("dataset"), py::arg("seed"), py::arg("policy") = "space",
     py::arg("allow_fixed_points") = false);
  m.def("apply_table", [](const std::string& json, const std::string& table,
                          const std::string& policy, bool invert) {
    PermutationTable t = PermutationTable::FromTsv(table, Policy(policy));
    if (invert) t = t.Inverse();
    return SerializeDataset(ApplyPermutation(ParseDataset(json), t));
  }, py::arg("dataset"), py::arg("table"), py::arg("policy") = "space",
     py::arg("invert") = false);
  m.def("codeswitch", [](const std::string& json, const std::string& dict,
                         const std::string& scope, const std::string& choice,
                         uint64_t seed) {
    const SwitchScope s = scope == "context"    ? SwitchScope::kContext
                          : scope == "question" ? SwitchScope::kQuestion
                          : scope == "both"     ? SwitchScope::kBoth
                          : throw ArgumentError("scope must be context, question or both");
    const SubstitutionChoice c = choice == "seeded" ? SubstitutionChoice::Seeded(seed)
                                                    : SubstitutionChoice::First();
    auto [out, report] = CodeSwitchDataset(ParseDataset(json),
                                           LoadDictionary(dict, "src", "tgt"), s, c);
    py::dict counts;
    counts["total_word_tokens"] = report.total_word_tokens;
    counts["substituted_tokens"] = report.substituted_tokens;
    counts["ratio"] = report.ratio();
    return py::make_tuple(SerializeDataset(out), counts);
  }, py::arg("dataset"), py::arg("dictionary"), py::arg("scope") = "both",
     py::arg("choice") = "first", py::arg("seed") = 0);
  m.def("relinearize", [](const std::string& conllu, const std::string& pattern) {
    std::vector<std::vector<std::string>> out;
    for (const DepSentence& s : ParseConllu(conllu)) {
      std::vector<std::string> forms;
      for (int i : RelinearizeSentence(s, Pattern(pattern))) forms.push_back(s.tokens[i - 1].form);
      out.push_back(std::move(forms));
    }
    return out;
  });
  m.def("reorder", [](const std::string& json, const std::string& conllu,
                      const std::string& pattern, const std::string& mode, int64_t cap) {
    return SerializeDataset(ReorderDataset(ParseDataset(json), ParseConllu(conllu),
                                           Pattern(pattern), Recovery(mode, cap)));
  }, py::arg("dataset"), py::arg("parses"), py::arg("pattern"),
     py::arg("mode") = "train", py::arg("cap") = 10);

  // Metrics.
  m.def("normalize_answer", [](const std::string& s, const std::string& lang) {
    return NormalizeAnswer(s, Lang(lang));
  }, py::arg("text"), py::arg("lang") = "mixed");
  m.def("token_f1", [](const std::string& p, const std::string& g, const std::string& lang) {
    return TokenF1(p, g, Lang(lang));
  }, py::arg("prediction"), py::arg("gold"), py::arg("lang") = "mixed");
  m.def("evaluate", [](const std::map<std::string, std::string>& predictions,
                       const std::string& json, const std::string& lang) {
    const MetricReport r = Evaluate(predictions, ParseDataset(json), Lang(lang));
    py::dict d;
    d["em"] = r.em;
    d["f1"] = r.f1;
    d["evaluated"] = r.evaluated;
    d["noise_count"] = r.noise_count;
    d["missing"] = r.missing_ids;
    return d;
  }, py::arg("predictions"), py::arg("dataset"), py::arg("lang") = "mixed");
  m.def("anova", [](const std::vector<std::vector<double>>& groups) {
    const AnovaResult r = AnovaOneway(groups);
    py::dict d;
    d["f"] = r.f_statistic;
    d["ss_between"] = r.ss_between;
    d["ss_within"] = r.ss_within;
    d["df_between"] = r.df_between;
    d["df_within"] = r.df_within;
    d["group_means"] = r.group_means;
    return d;
  });

  // Representations.
  m.def("load_representations", [](const py::bytes& repm, const std::string& meta) {
    const ReprMatrix r = LoadRepresentations(std::string(repm), meta);
    std::vector<py::dict> rows;
    for (const RowMeta& mm : r.meta) {
      py::dict d;
      d["example_id"] = mm.example_id;
      d["token_index"] = mm.token_index;
      d["token_text"] = mm.token_text;
      d["in_answer_span"] = mm.in_answer_span;
      d["language"] = mm.language;
      rows.push_back(d);
    }
    return py::make_tuple(r.ToEigen(), rows);
  });
  m.def("store_representations", [](const Eigen::MatrixXd& x,
                                    const std::vector<py::dict>& meta) {
    auto [bytes, tsv] = StoreRepresentations(ReprMatrix::FromEigen(x, MetaFrom(meta)));
    return py::make_tuple(py::bytes(bytes), tsv);
  });
  m.def("pca", [](const Eigen::MatrixXd& x, size_t components) {
    const PcaResult r = PcaProject(x, components);
    py::dict d;
    d["coordinates"] = r.coordinates;
    d["loadings"] = r.loadings;
    d["explained_ratio"] = r.explained_ratio;
    d["warnings"] = r.warnings;
    return d;
  }, py::arg("x"), py::arg("components") = 2);
  m.def("svcca", [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                    double variance_fraction, double epsilon) {
    const SvccaResult r = Svcca(x, y, {variance_fraction, epsilon});
    py::dict d;
    d["correlations"] = r.correlations;
    d["mean"] = r.mean_correlation;
    d["kept_x"] = r.kept_x;
    d["kept_y"] = r.kept_y;
    d["warnings"] = r.warnings;
    return d;
  }, py::arg("x"), py::arg("y"), py::arg("variance_fraction") = 0.99,
     py::arg("epsilon") = 1e-10);
  m.def("procrustes", [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    const LinearMap r = ProcrustesAlign(x, y);
    py::dict d;
    d["matrix"] = r.matrix;
    d["residual"] = r.residual;
    d["warnings"] = r.warnings;
    return d;
  });

  // Pipelines. Returns the run report as JSON text.
  m.def("run_manifest", [](const std::string& manifest, const std::string& base_dir) {
    return RunManifest(ParseManifest(manifest, base_dir)).dump();
  }, py::arg("manifest"), py::arg("base_dir") = ".");
}
