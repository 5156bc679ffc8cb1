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

#include <filesystem>

#include "doctest.h"
#include "test_util.h"
#include "xforge/dataset.h"
#include "xforge/digest.h"
#include "xforge/error.h"
#include "xforge/manifest.h"
#include "xforge/repr.h"

using namespace xforge;
namespace fs = std::filesystem;

namespace {

Manifest Load(const fs::path& dir, const std::string& json) {
  return ParseManifest(json, dir);
}

std::string Predictions(const RcDataset& d) {
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  d.ForEachQa([&](size_t, size_t, const QaEntry& qa) {
    p[qa.id] = qa.answers.empty() ? "" : qa.answers[0].text;
  });
  return p.dump();
}

}  // namespace

TEST_CASE("single downsample step") {
  const fs::path dir = testutil::ScratchDir("manifest_downsample");
  WriteFile(dir / "in.json", SerializeDataset(testutil::SyntheticCorpus(1, 5, 4)));
  const Manifest m = Load(dir, R"({"seed": 3, "steps": [
      {"kind": "downsample", "inputs": {"dataset": "in.json"},
       "outputs": {"dataset": "out/small.json"}, "params": {"target": 7}}]})");
  const auto report = RunManifest(m);
  REQUIRE(RunSucceeded(report));
  CHECK(report["seed"] == 3);
  CHECK(report["toolkit_version"] == std::string(kToolkitVersion));
  const auto& step = report["steps"][0];
  CHECK(step["counts"]["qas_in"] == 20);
  CHECK(step["counts"]["qas_out"] == 7);
  const std::string bytes = ReadFile(dir / "out/small.json");
  CHECK(step["outputs"]["dataset"]["sha256"] == Sha256Hex(bytes));
  CHECK(step["inputs"]["dataset"]["sha256"] == Sha256Hex(ReadFile(dir / "in.json")));
  const RcDataset out = ParseDataset(bytes);
  CHECK(out.QaCount() == 7);
  out.ForEachQa([&](size_t, size_t, const QaEntry& qa) {
    REQUIRE(qa.lineage.size() == 1);
    CHECK(qa.lineage[0].op == "downsample");
    CHECK(qa.lineage[0].params.at("step") == "0");
    CHECK(qa.lineage[0].params.at("seed") == "3");
    CHECK(qa.lineage[0].params.at("input_sha256") == step["inputs"]["dataset"]["sha256"]);
  });
}

TEST_CASE("validation happens before any step runs") {
  const fs::path dir = testutil::ScratchDir("manifest_validation");
  WriteFile(dir / "in.json", SerializeDataset(testutil::SyntheticCorpus(1, 2, 2)));
  const Manifest dangling = Load(dir, R"({"steps": [
      {"kind": "downsample", "inputs": {"dataset": "in.json"},
       "outputs": {"dataset": "a.json"}, "params": {"target": 1}},
      {"kind": "downsample", "inputs": {"dataset": "missing.json"},
       "outputs": {"dataset": "b.json"}, "params": {"target": 1}}]})");
  try {
    RunManifest(dangling);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("step 1") != std::string::npos);
  }
  CHECK_FALSE(fs::exists(dir / "a.json"));

  // An input produced by an earlier step is fine.
  const Manifest chained = Load(dir, R"({"steps": [
      {"kind": "downsample", "inputs": {"dataset": "in.json"},
       "outputs": {"dataset": "a.json"}, "params": {"target": 3}},
      {"kind": "downsample", "inputs": {"dataset": "./a.json"},
       "outputs": {"dataset": "b.json"}, "params": {"target": 2}}]})");
  CHECK_NOTHROW(ValidateManifest(chained));

  auto rejects = [&](const std::string& steps) {
    CHECK_THROWS_AS(ValidateManifest(Load(dir, R"({"steps": [)" + steps + "]}")),
                    ValidationError);
  };
  rejects(R"({"kind": "shuffle", "inputs": {}, "outputs": {}})");
  rejects(R"({"kind": "downsample", "inputs": {"dataset": "in.json"},
              "outputs": {"dataset": "x.json"}})");
  rejects(R"({"kind": "downsample", "inputs": {"dataset": "in.json"},
              "outputs": {"dataset": "x.json"}, "params": {"target": "7"}})");
  rejects(R"({"kind": "downsample", "inputs": {"dataset": "in.json", "extra": "in.json"},
              "outputs": {"dataset": "x.json"}, "params": {"target": 1}})");
  rejects(R"({"kind": "reorder", "inputs": {"dataset": "in.json", "parses": "in.json"},
              "outputs": {"dataset": "x.json"}, "params": {"pattern": "xyz"}})");
  rejects(R"({"kind": "permute", "inputs": {"dataset": "in.json"},
              "outputs": {"dataset": "x.json"}, "params": {"invert": true}})");
  rejects(R"({"kind": "analyze", "inputs": {"x": "in.json", "x_meta": "in.json"},
              "outputs": {"report": "r.tsv"}, "params": {"analysis": "svcca"}})");

  CHECK_THROWS_AS(Load(dir, "not json"), ParseError);
  CHECK_THROWS_AS(Load(dir, R"({"steps": 3})"), ParseError);
}

TEST_CASE("permute then eval is reproducible") {
  const fs::path dir = testutil::ScratchDir("manifest_determinism");
  const RcDataset d = testutil::SyntheticCorpus(9, 6, 3);
  WriteFile(dir / "in.json", SerializeDataset(d));
  WriteFile(dir / "pred.json", Predictions(d));
  const std::string json = R"({"seed": 42, "steps": [
      {"kind": "permute", "inputs": {"dataset": "in.json"},
       "outputs": {"dataset": "perm.json", "table": "perm.tsv"}},
      {"kind": "permute", "inputs": {"dataset": "perm.json", "table": "perm.tsv"},
       "outputs": {"dataset": "back.json"}, "params": {"invert": true}},
      {"kind": "eval", "inputs": {"dataset": "back.json", "predictions": "pred.json"},
       "outputs": {"report": "eval.json"}, "params": {"lang": "english"}}]})";
  const auto first = RunManifest(Load(dir, json));
  REQUIRE(RunSucceeded(first));
  const std::string perm1 = ReadFile(dir / "perm.json");
  const std::string eval1 = ReadFile(dir / "eval.json");
  const auto second = RunManifest(Load(dir, json));
  CHECK(first.dump() == second.dump());
  CHECK(ReadFile(dir / "perm.json") == perm1);
  CHECK(ReadFile(dir / "eval.json") == eval1);
  CHECK(first["steps"][0]["counts"]["fixed_points"] == 0);
  CHECK(first["steps"][2]["counts"]["em"] == 100.0);

  // The inverse restores every context and answer.
  const RcDataset back = ParseDataset(ReadFile(dir / "back.json"));
  REQUIRE(back.QaCount() == d.QaCount());
  for (size_t a = 0; a < d.articles.size(); ++a) {
    for (size_t p = 0; p < d.articles[a].paragraphs.size(); ++p) {
      const auto& x = d.articles[a].paragraphs[p];
      const auto& y = back.articles[a].paragraphs[p];
      CHECK(x.context == y.context);
      for (size_t q = 0; q < x.qas.size(); ++q) {
        CHECK(x.qas[q].answers == y.qas[q].answers);
        CHECK(x.qas[q].question == y.qas[q].question);
      }
    }
  }

  const std::string other = json.substr(0, json.find("42")) + "43" +
                            json.substr(json.find("42") + 2);
  RunManifest(Load(dir, other));
  CHECK(ReadFile(dir / "perm.json") != perm1);
}

TEST_CASE("a failing step stops the run and keeps earlier outputs") {
  const fs::path dir = testutil::ScratchDir("manifest_failure");
  WriteFile(dir / "in.json", SerializeDataset(testutil::SyntheticCorpus(2, 4, 2)));
  WriteFile(dir / "table.tsv", "the\tlaw\nlaw\tthe\n");
  const auto report = RunManifest(Load(dir, R"({"steps": [
      {"kind": "downsample", "inputs": {"dataset": "in.json"},
       "outputs": {"dataset": "a.json"}, "params": {"target": 4}},
      {"kind": "permute", "inputs": {"dataset": "a.json", "table": "table.tsv"},
       "outputs": {"dataset": "b.json"}},
      {"kind": "downsample", "inputs": {"dataset": "b.json"},
       "outputs": {"dataset": "c.json"}, "params": {"target": 1}}]})"));
  CHECK_FALSE(RunSucceeded(report));
  CHECK(report["failed_step"] == 1);
  CHECK(report["steps"].size() == 2);
  CHECK(report["steps"][1]["error"]["kind"] == "coverage");
  CHECK(fs::exists(dir / "a.json"));
  CHECK_FALSE(fs::exists(dir / "b.json"));
  CHECK_FALSE(fs::exists(dir / "c.json"));
}

TEST_CASE("analyze step") {
  const fs::path dir = testutil::ScratchDir("manifest_analyze");
  Eigen::MatrixXd x(4, 2);
  x << 1, 0, 0, 1, 2, 1, -1, 3;
  std::vector<RowMeta> meta;
  for (int i = 0; i < 4; ++i) meta.push_back({"e" + std::to_string(i / 2), i % 2, "t", true, "en"});
  const auto [bytes, tsv] = StoreRepresentations(ReprMatrix::FromEigen(x, meta));
  WriteFile(dir / "x.repm", bytes);
  WriteFile(dir / "x.tsv", tsv);
  const auto report = RunManifest(Load(dir, R"({"steps": [
      {"kind": "analyze", "inputs": {"x": "x.repm", "x_meta": "x.tsv",
                                     "y": "x.repm", "y_meta": "x.tsv"},
       "outputs": {"report": "svcca.tsv"}, "params": {"analysis": "svcca"}},
      {"kind": "analyze", "inputs": {"x": "x.repm", "x_meta": "x.tsv",
                                     "y": "x.repm", "y_meta": "x.tsv"},
       "outputs": {"report": "map.tsv"}, "params": {"analysis": "procrustes"}},
      {"kind": "analyze", "inputs": {"x": "x.repm", "x_meta": "x.tsv"},
       "outputs": {"report": "pca.tsv"}, "params": {"analysis": "pca"}}]})"));
  REQUIRE(RunSucceeded(report));
  CHECK(std::abs(report["steps"][0]["counts"]["mean_correlation"].get<double>() - 1.0) < 1e-9);
  CHECK(report["steps"][1]["counts"]["residual"].get<double>() < 1e-9);
  CHECK(ReadFile(dir / "svcca.tsv").rfind("index\tcorrelation\n", 0) == 0);
  CHECK(ReadFile(dir / "pca.tsv").find("\tpc2\n") != std::string::npos);

  // Rows that pair different tokens are rejected unless the check is off.
  std::vector<RowMeta> shifted = meta;
  shifted[0].token_index = 9;
  const auto [b2, t2] = StoreRepresentations(ReprMatrix::FromEigen(x, shifted));
  WriteFile(dir / "y.repm", b2);
  WriteFile(dir / "y.tsv", t2);
  const std::string step = R"({"steps": [
      {"kind": "analyze", "inputs": {"x": "x.repm", "x_meta": "x.tsv",
                                     "y": "y.repm", "y_meta": "y.tsv"},
       "outputs": {"report": "s.tsv"}, "params": {"analysis": "svcca")";
  CHECK_FALSE(RunSucceeded(RunManifest(Load(dir, step + "}}]}"))));
  CHECK(RunSucceeded(RunManifest(Load(dir, step + R"(, "check_pairing": false}}]})"))));
}
