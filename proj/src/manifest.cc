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

#include "xforge/manifest.h"

#include <charconv>
#include <fstream>
#include <iostream>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "xforge/codeswitch.h"
#include "xforge/dataset.h"
#include "xforge/digest.h"
#include "xforge/error.h"
#include "xforge/metrics.h"
#include "xforge/permute.h"
#include "xforge/repr.h"
#include "xforge/span_recovery.h"
#include "xforge/tsv.h"
#include "xforge/typology.h"

namespace xforge {
namespace {

using Json = nlohmann::ordered_json;

// Reads typed parameters, raising ValidationError with the step context.
class Params {
 public:
  Params(const Json& params, std::string where)
      : params_(params), where_(std::move(where)) {}

  int64_t Int(const char* key, int64_t fallback) const {
    const Json* v = Find(key);
    if (v == nullptr) return fallback;
    if (!v->is_number_integer()) Fail(key, "expected an integer");
    return v->get<int64_t>();
  }

  double Real(const char* key, double fallback) const {
    const Json* v = Find(key);
    if (v == nullptr) return fallback;
    if (!v->is_number()) Fail(key, "expected a number");
    return v->get<double>();
  }

  bool Bool(const char* key, bool fallback) const {
    const Json* v = Find(key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) Fail(key, "expected a boolean");
    return v->get<bool>();
  }

  std::string Str(const char* key, std::string fallback) const {
    const Json* v = Find(key);
    if (v == nullptr) return fallback;
    if (!v->is_string()) Fail(key, "expected a string");
    return v->get<std::string>();
  }

  [[noreturn]] void Fail(const char* key, const std::string& why) const {
    throw ValidationError(where_ + ": param \"" + key + "\": " + why);
  }

 private:
  const Json* Find(const char* key) const {
    auto it = params_.find(key);
    return it == params_.end() ? nullptr : &*it;
  }

  const Json& params_;
  std::string where_;
};

RecoveryPolicy ReadPolicy(const Params& p) {
  RecoveryPolicy policy;
  policy.cap = p.Int("cap", 10);
  if (policy.cap < 0) p.Fail("cap", "must be non-negative");
  const std::string mode = p.Str("mode", "train");
  if (mode == "train") {
    policy.mode = RecoveryMode::kTrainDrop;
  } else if (mode == "test") {
    policy.mode = RecoveryMode::kTestKeep;
  } else {
    p.Fail("mode", "must be train or test");
  }
  return policy;
}

TokenizerPolicy ReadTokenizer(const Params& p, const char* fallback) {
  const auto mode = ParseMode(p.Str("policy", fallback));
  if (!mode) p.Fail("policy", "must be space, cjk or mixed");
  return TokenizerPolicy{*mode};
}

struct StepShape {
  std::vector<std::string> inputs;
  std::vector<std::string> optional_inputs;
  std::vector<std::string> outputs;
  std::vector<std::string> optional_outputs;
};

const std::map<std::string, StepShape>& Shapes() {
  static const auto* shapes = new std::map<std::string, StepShape>{
      {"downsample", {{"dataset"}, {}, {"dataset"}, {}}},
      {"recover", {{"dataset", "triples"}, {}, {"dataset"}, {}}},
      {"permute", {{"dataset"}, {"table"}, {"dataset"}, {"table"}}},
      {"codeswitch", {{"dataset", "dict"}, {}, {"dataset"}, {}}},
      {"reorder", {{"dataset", "parses"}, {}, {"dataset"}, {}}},
      {"eval", {{"dataset", "predictions"}, {}, {"report"}, {}}},
      {"analyze", {{"x", "x_meta"}, {"y", "y_meta", "pairing"}, {"report"}, {}}},
  };
  return *shapes;
}

// Parameter checks that need no input data.
void CheckParams(const Step& step, const std::string& where) {
  const Params p(step.params, where);
  const std::string& k = step.kind;
  if (k == "downsample") {
    if (p.Int("target", -1) < 0) p.Fail("target", "required, non-negative");
    p.Int("seed", 0);
  } else if (k == "recover") {
    ReadPolicy(p);
  } else if (k == "permute") {
    ReadTokenizer(p, "space");
    p.Int("seed", 0);
    p.Bool("allow_fixed_points", false);
    if (p.Bool("invert", false) && !step.inputs.contains("table")) {
      p.Fail("invert", "needs a table input");
    }
  } else if (k == "codeswitch") {
    ReadTokenizer(p, "mixed");
    const std::string scope = p.Str("scope", "both");
    if (scope != "context" && scope != "question" && scope != "both") {
      p.Fail("scope", "must be context, question or both");
    }
    const std::string choice = p.Str("choice", "first");
    if (choice != "first" && choice != "seeded") {
      p.Fail("choice", "must be first or seeded");
    }
    p.Int("seed", 0);
    p.Str("source_lang", "src");
    p.Str("target_lang", "tgt");
  } else if (k == "reorder") {
    if (!ParsePattern(p.Str("pattern", ""))) {
      p.Fail("pattern", "required, one of svo sov vos vso osv ovs");
    }
    ReadPolicy(p);
  } else if (k == "eval") {
    if (!ParseLangClass(p.Str("lang", "mixed"))) {
      p.Fail("lang", "must be english, cjk or mixed");
    }
  } else if (k == "analyze") {
    const std::string a = p.Str("analysis", "");
    static const std::set<std::string> kinds = {"cosine", "pca", "svcca",
                                                "procrustes"};
    if (!kinds.contains(a)) {
      p.Fail("analysis", "required, one of cosine pca svcca procrustes");
    }
    if (a != "pca" && (!step.inputs.contains("y") ||
                       !step.inputs.contains("y_meta"))) {
      p.Fail("analysis", a + " needs y and y_meta inputs");
    }
    if (p.Int("components", 2) < 1) p.Fail("components", "must be positive");
    const double tau = p.Real("variance_fraction", 0.99);
    if (!(tau > 0.0 && tau <= 1.0)) {
      p.Fail("variance_fraction", "must lie in (0, 1]");
    }
    if (p.Real("epsilon", 1e-10) < 0.0) p.Fail("epsilon", "must be >= 0");
    p.Bool("check_pairing", true);
  }
}

std::string FormatReal(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Json CountsJson(const std::vector<std::pair<std::string, Json>>& items) {
  Json out = Json::object();
  for (const auto& [k, v] : items) out[k] = v;
  return out;
}

// Stamps this step onto every qa: the tag the operation appended gains the
// step index and input digest; qas the operation left untouched get a tag
// of their own.
void AnnotateLineage(const RcDataset& before, RcDataset& after,
                     size_t step_index, const Step& step, int64_t seed,
                     const std::string& input_digest) {
  std::unordered_map<std::string, size_t> prior;
  before.ForEachQa([&](size_t, size_t, const QaEntry& qa) {
    prior[qa.id] = qa.lineage.size();
  });
  for (Article& article : after.articles) {
    for (Paragraph& para : article.paragraphs) {
      for (QaEntry& qa : para.qas) {
        auto it = prior.find(qa.id);
        const size_t had = it == prior.end() ? 0 : it->second;
        if (qa.lineage.size() <= had) {
          TransformTag tag;
          tag.op = step.kind;
          for (const auto& [k, v] : step.params.items()) {
            tag.params[k] = v.is_string() ? v.get<std::string>() : v.dump();
          }
          qa.lineage.push_back(std::move(tag));
        }
        auto& params = qa.lineage.back().params;
        params["step"] = std::to_string(step_index);
        params["seed"] = std::to_string(seed);
        params["input_sha256"] = input_digest;
      }
    }
  }
}

std::map<std::string, std::string> ParsePairing(std::string_view bytes) {
  std::map<std::string, std::string> out;
  const auto lines = tsv::SplitLines(bytes);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = tsv::SplitFields(lines[i]);
    if (f.size() != 2) {
      throw ParseError("pairing line " + std::to_string(i + 1) +
                       ": expected 2 fields");
    }
    out[tsv::Unescape(f[0])] = tsv::Unescape(f[1]);
  }
  return out;
}

void CheckRowPairing(const ReprMatrix& x, const ReprMatrix& y) {
  if (x.n != y.n) {
    throw ArgumentError("paired analyses need equal row counts, got " +
                        std::to_string(x.n) + " and " + std::to_string(y.n));
  }
  for (size_t r = 0; r < x.n; ++r) {
    if (x.meta[r].example_id != y.meta[r].example_id ||
        x.meta[r].token_index != y.meta[r].token_index) {
      throw ArgumentError("row " + std::to_string(r) +
                          " pairs different (example_id, token_index)");
    }
  }
}

class Runner {
 public:
  explicit Runner(const Manifest& m) : m_(m) {}

  Json Run() {
    Json report = Json::object();
    report["toolkit_version"] = std::string(kToolkitVersion);
    report["manifest_version"] = m_.version;
    report["seed"] = m_.seed;
    Json steps = Json::array();
    bool ok = true;
    for (size_t i = 0; i < m_.steps.size(); ++i) {
      const Step& step = m_.steps[i];
      Json entry = Json::object();
      entry["index"] = i;
      entry["kind"] = step.kind;
      entry["params"] = step.params;
      inputs_ = Json::object();
      outputs_ = Json::object();
      try {
        Json counts = Execute(i, step);
        entry["status"] = "ok";
        entry["inputs"] = inputs_;
        entry["outputs"] = outputs_;
        entry["counts"] = std::move(counts);
      } catch (const Error& e) {
        entry["status"] = "failed";
        entry["inputs"] = inputs_;
        entry["error"] = {{"kind", e.kind()}, {"message", e.what()}};
        ok = false;
      } catch (const std::exception& e) {
        entry["status"] = "failed";
        entry["inputs"] = inputs_;
        entry["error"] = {{"kind", "internal"}, {"message", e.what()}};
        ok = false;
      }
      steps.push_back(std::move(entry));
      if (!ok) {
        report["failed_step"] = i;
        break;
      }
    }
    report["steps"] = std::move(steps);
    report["status"] = ok ? "ok" : "failed";
    return report;
  }

 private:
  std::string Input(const Step& step, const std::string& key) {
    const std::string bytes = ReadFile(m_.Resolve(step.inputs.at(key)));
    const std::string digest = Sha256Hex(bytes);
    inputs_[key] = {{"path", step.inputs.at(key)}, {"sha256", digest}};
    digests_[key] = digest;
    return bytes;
  }

  void Output(const Step& step, const std::string& key,
              std::string_view bytes) {
    if (step.outputs.at(key) == "-") {
      std::cout.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
      std::cout.flush();
    } else {
      WriteFile(m_.Resolve(step.outputs.at(key)), bytes);
    }
    outputs_[key] = {{"path", step.outputs.at(key)},
                     {"sha256", Sha256Hex(bytes)}};
  }

  void WriteDataset(size_t index, const Step& step, const RcDataset& before,
                    RcDataset after, int64_t seed) {
    AnnotateLineage(before, after, index, step, seed, digests_.at("dataset"));
    Output(step, "dataset", SerializeDataset(after));
  }

  Json Execute(size_t index, const Step& step) {
    const Params p(step.params, "step " + std::to_string(index));
    const int64_t seed = p.Int("seed", m_.seed);
    const std::string& k = step.kind;

    if (k == "downsample") {
      const RcDataset d = ParseDataset(Input(step, "dataset"));
      const auto target = static_cast<size_t>(p.Int("target", 0));
      RcDataset out = Downsample(d, target, static_cast<uint64_t>(seed));
      const size_t kept = out.QaCount();
      WriteDataset(index, step, d, std::move(out), seed);
      return CountsJson({{"qas_in", d.QaCount()}, {"qas_out", kept}});
    }
    if (k == "recover") {
      const RcDataset d = ParseDataset(Input(step, "dataset"));
      const auto triples = ParseTriples(Input(step, "triples"));
      RecoveryStats stats;
      RcDataset out = RecoverDataset(d, triples, ReadPolicy(p), &stats);
      WriteDataset(index, step, d, std::move(out), seed);
      return CountsJson({{"recovered", stats.recovered},
                         {"exact", stats.exact},
                         {"noise", stats.noise},
                         {"dropped", stats.dropped},
                         {"missing", stats.missing}});
    }
    if (k == "permute") {
      const RcDataset d = ParseDataset(Input(step, "dataset"));
      const TokenizerPolicy policy = ReadTokenizer(p, "space");
      PermutationTable table;
      if (step.inputs.contains("table")) {
        table = PermutationTable::FromTsv(Input(step, "table"), policy);
        if (p.Bool("invert", false)) table = table.Inverse();
      } else {
        table = BuildPermutation(BuildVocab(d, policy), seed,
                                 !p.Bool("allow_fixed_points", false), policy);
      }
      RcDataset out = ApplyPermutation(d, table);
      WriteDataset(index, step, d, std::move(out), seed);
      if (step.outputs.contains("table")) {
        Output(step, "table", table.ToTsv());
      }
      return CountsJson({{"vocabulary", table.vocabulary().size()},
                         {"fixed_points", table.FixedPoints()}});
    }
    if (k == "codeswitch") {
      const RcDataset d = ParseDataset(Input(step, "dataset"));
      const BilingualDictionary dict =
          LoadDictionary(Input(step, "dict"), p.Str("source_lang", "src"),
                         p.Str("target_lang", "tgt"));
      const std::string scope_name = p.Str("scope", "both");
      const SwitchScope scope = scope_name == "context"    ? SwitchScope::kContext
                                : scope_name == "question" ? SwitchScope::kQuestion
                                                           : SwitchScope::kBoth;
      const SubstitutionChoice choice =
          p.Str("choice", "first") == "seeded"
              ? SubstitutionChoice::Seeded(static_cast<uint64_t>(seed))
              : SubstitutionChoice::First();
      auto [out, report] =
          CodeSwitchDataset(d, dict, scope, choice, ReadTokenizer(p, "mixed"));
      WriteDataset(index, step, d, std::move(out), seed);
      return CountsJson({{"total_word_tokens", report.total_word_tokens},
                         {"substituted_tokens", report.substituted_tokens},
                         {"ratio", report.ratio()}});
    }
    if (k == "reorder") {
      const RcDataset d = ParseDataset(Input(step, "dataset"));
      const auto parses = ParseConllu(Input(step, "parses"));
      ReorderStats stats;
      RcDataset out = ReorderDataset(d, parses,
                                     *ParsePattern(p.Str("pattern", "")),
                                     ReadPolicy(p), &stats);
      WriteDataset(index, step, d, std::move(out), seed);
      return CountsJson({{"sentences", stats.sentences},
                         {"reordered_sentences", stats.changed_sentences},
                         {"recovered", stats.recovered},
                         {"exact_answers", stats.exact},
                         {"noise", stats.noise},
                         {"dropped", stats.dropped}});
    }
    if (k == "eval") {
      const RcDataset d = ParseDataset(Input(step, "dataset"));
      const auto predictions = ParsePredictions(Input(step, "predictions"));
      const LangClass lang = *ParseLangClass(p.Str("lang", "mixed"));
      const MetricReport r = Evaluate(predictions, d, lang);
      Json doc = Json::object();
      doc["em"] = r.em;
      doc["f1"] = r.f1;
      doc["evaluated"] = r.evaluated;
      doc["noise_count"] = r.noise_count;
      doc["missing"] = r.missing_ids;
      Json per = Json::array();
      for (const ExampleScore& s : r.examples) {
        per.push_back({{"id", s.id}, {"em", s.em}, {"f1", s.f1},
                       {"noise", s.noise}, {"missing", s.missing}});
      }
      doc["examples"] = std::move(per);
      Output(step, "report", doc.dump(2) + "\n");
      return CountsJson({{"em", r.em},
                         {"f1", r.f1},
                         {"evaluated", r.evaluated},
                         {"noise_count", r.noise_count},
                         {"missing", r.missing_ids.size()}});
    }
    return Analyze(step, p);
  }

  Json Analyze(const Step& step, const Params& p) {
    const std::string analysis = p.Str("analysis", "");
    const ReprMatrix x =
        LoadRepresentations(Input(step, "x"), Input(step, "x_meta"));
    std::string out;
    Json counts = Json::object();
    if (analysis == "pca") {
      const PcaResult r = PcaProject(
          x.ToEigen(), static_cast<size_t>(p.Int("components", 2)));
      out = "row_index\texample_id\ttoken_index\ttoken_text\tin_answer_span\t"
            "language";
      for (Eigen::Index c = 0; c < r.coordinates.cols(); ++c) {
        out += "\tpc" + std::to_string(c + 1);
      }
      out += '\n';
      for (size_t row = 0; row < x.n; ++row) {
        const RowMeta& m = x.meta[row];
        out += std::to_string(row) + '\t' + tsv::Escape(m.example_id) + '\t' +
               std::to_string(m.token_index) + '\t' +
               tsv::Escape(m.token_text) + '\t' +
               (m.in_answer_span ? "1" : "0") + '\t' + tsv::Escape(m.language);
        for (Eigen::Index c = 0; c < r.coordinates.cols(); ++c) {
          out += '\t' + FormatReal(r.coordinates(static_cast<Eigen::Index>(row), c));
        }
        out += '\n';
      }
      Json ratios = Json::array();
      for (Eigen::Index c = 0; c < r.explained_ratio.size(); ++c) {
        ratios.push_back(r.explained_ratio(c));
      }
      counts["components"] = r.coordinates.cols();
      counts["explained_ratio"] = std::move(ratios);
      counts["warnings"] = r.warnings;
    } else {
      const ReprMatrix y =
          LoadRepresentations(Input(step, "y"), Input(step, "y_meta"));
      if (analysis == "cosine") {
        std::map<std::string, std::string> pairing;
        if (step.inputs.contains("pairing")) {
          pairing = ParsePairing(Input(step, "pairing"));
        } else {
          for (const RowMeta& m : x.meta) {
            if (m.in_answer_span) pairing[m.example_id] = m.example_id;
          }
        }
        const CosineReport r = AnswerSpanCosine(x, y, pairing);
        out = "x_example\ty_example\tcosine\n";
        for (size_t i = 0; i < r.pairs.size(); ++i) {
          out += tsv::Escape(r.pairs[i].first) + '\t' +
                 tsv::Escape(r.pairs[i].second) + '\t' +
                 FormatReal(r.cosines[i]) + '\n';
        }
        for (const auto& [a, b] : r.skipped) {
          out += tsv::Escape(a) + '\t' + tsv::Escape(b) + "\tNA\n";
        }
        counts["pairs"] = r.pairs.size();
        counts["skipped"] = r.skipped.size();
        counts["mean"] = r.mean;
      } else if (analysis == "svcca") {
        if (p.Bool("check_pairing", true)) CheckRowPairing(x, y);
        SvccaConfig cfg;
        cfg.variance_fraction = p.Real("variance_fraction", 0.99);
        cfg.epsilon = p.Real("epsilon", 1e-10);
        const SvccaResult r = Svcca(x.ToEigen(), y.ToEigen(), cfg);
        out = "index\tcorrelation\n";
        for (size_t i = 0; i < r.correlations.size(); ++i) {
          out += std::to_string(i) + '\t' + FormatReal(r.correlations[i]) + '\n';
        }
        counts["mean_correlation"] = r.mean_correlation;
        counts["kept_x"] = r.kept_x;
        counts["kept_y"] = r.kept_y;
        counts["warnings"] = r.warnings;
      } else {
        if (p.Bool("check_pairing", true)) CheckRowPairing(x, y);
        const LinearMap r = ProcrustesAlign(x.ToEigen(), y.ToEigen());
        for (Eigen::Index i = 0; i < r.matrix.rows(); ++i) {
          for (Eigen::Index j = 0; j < r.matrix.cols(); ++j) {
            if (j > 0) out += '\t';
            out += FormatReal(r.matrix(i, j));
          }
          out += '\n';
        }
        counts["residual"] = r.residual;
        counts["warnings"] = r.warnings;
      }
    }
    Output(step, "report", out);
    return counts;
  }

  const Manifest& m_;
  Json inputs_;
  Json outputs_;
  std::map<std::string, std::string> digests_;
};

}  // namespace

std::filesystem::path Manifest::Resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  return p.is_absolute() ? p : base_dir / p;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

Manifest ParseManifest(std::string_view bytes,
                       const std::filesystem::path& base_dir) {
  Json root;
  try {
    root = Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("manifest: expected object");
  Manifest m;
  m.base_dir = base_dir;
  if (auto v = root.find("seed"); v != root.end()) {
    if (!v->is_number_integer()) throw ParseError("manifest.seed: expected integer");
    m.seed = v->get<int64_t>();
  }
  if (auto v = root.find("version"); v != root.end()) {
    if (!v->is_string()) throw ParseError("manifest.version: expected string");
    m.version = v->get<std::string>();
  }
  auto steps = root.find("steps");
  if (steps == root.end() || !steps->is_array()) {
    throw ParseError("manifest.steps: expected array");
  }
  for (size_t i = 0; i < steps->size(); ++i) {
    const Json& js = (*steps)[i];
    const std::string where = "manifest.steps[" + std::to_string(i) + "]";
    if (!js.is_object()) throw ParseError(where + ": expected object");
    Step step;
    auto kind = js.find("kind");
    if (kind == js.end() || !kind->is_string()) {
      throw ParseError(where + ".kind: expected string");
    }
    step.kind = kind->get<std::string>();
    if (auto params = js.find("params"); params != js.end()) {
      if (!params->is_object()) throw ParseError(where + ".params: expected object");
      step.params = *params;
    }
    for (const char* key : {"inputs", "outputs"}) {
      auto files = js.find(key);
      if (files == js.end()) continue;
      if (!files->is_object()) {
        throw ParseError(where + "." + key + ": expected object");
      }
      auto& target = std::string_view(key) == "inputs" ? step.inputs : step.outputs;
      for (const auto& [name, path] : files->items()) {
        if (!path.is_string()) {
          throw ParseError(where + "." + key + "." + name + ": expected path");
        }
        target[name] = path.get<std::string>();
      }
    }
    m.steps.push_back(std::move(step));
  }
  return m;
}

void ValidateManifest(const Manifest& m) {
  std::set<std::filesystem::path> produced;
  for (size_t i = 0; i < m.steps.size(); ++i) {
    const Step& step = m.steps[i];
    const std::string where = "step " + std::to_string(i) + " (" + step.kind + ")";
    auto shape = Shapes().find(step.kind);
    if (shape == Shapes().end()) {
      throw ValidationError(where + ": unknown step kind");
    }
    auto check_keys = [&](const std::map<std::string, std::string>& given,
                          const std::vector<std::string>& required,
                          const std::vector<std::string>& optional,
                          const char* what) {
      for (const std::string& key : required) {
        if (!given.contains(key)) {
          throw ValidationError(where + ": missing " + what + " \"" + key + "\"");
        }
      }
      for (const auto& [key, path] : given) {
        const bool known =
            std::find(required.begin(), required.end(), key) != required.end() ||
            std::find(optional.begin(), optional.end(), key) != optional.end();
        if (!known) {
          throw ValidationError(where + ": unexpected " + what + " \"" + key + "\"");
        }
      }
    };
    check_keys(step.inputs, shape->second.inputs, shape->second.optional_inputs,
               "input");
    check_keys(step.outputs, shape->second.outputs,
               shape->second.optional_outputs, "output");
    CheckParams(step, where);
    for (const auto& [key, path] : step.inputs) {
      const auto resolved = m.Resolve(path).lexically_normal();
      if (!produced.contains(resolved) && !std::filesystem::exists(resolved)) {
        throw ValidationError(where + ": input \"" + key + "\" (" + path +
                              ") does not exist and no earlier step writes it");
      }
    }
    for (const auto& [key, path] : step.outputs) {
      if (path == "-") continue;
      produced.insert(m.Resolve(path).lexically_normal());
    }
  }
}

nlohmann::ordered_json RunManifest(const Manifest& m) {
  ValidateManifest(m);
  return Runner(m).Run();
}

bool RunSucceeded(const nlohmann::ordered_json& report) {
  auto it = report.find("status");
  return it != report.end() && *it == "ok";
}

}  // namespace xforge
