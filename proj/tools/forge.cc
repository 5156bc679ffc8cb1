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

// forge: command-line front end. Every single-step subcommand is a
// one-step manifest, so it shares validation, lineage and reporting with
// `forge run`.

#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "xforge/error.h"
#include "xforge/manifest.h"

namespace {

using Json = nlohmann::ordered_json;

void PrintError(const std::string& kind, const std::string& message) {
  Json err = {{"status", "failed"},
              {"error", {{"kind", kind}, {"message", message}}}};
  std::cerr << err.dump() << "\n";
}

struct Common {
  int64_t seed = 0;
  std::string out;
  std::string report;
};

void AddCommon(CLI::App* cmd, Common& c, bool out_required = true) {
  cmd->add_option("--seed", c.seed, "Seed for seeded steps");
  auto* out = cmd->add_option("--out", c.out, "Output path ('-' for stdout)");
  if (out_required) out->required();
  cmd->add_option("--report", c.report, "Write the run report here");
}

// "-" prints the report to stdout.
void WriteReport(const std::string& path, const Json& report) {
  const std::string bytes = report.dump(2) + "\n";
  if (path == "-") {
    std::cout << bytes;
    std::cout.flush();
  } else {
    xforge::WriteFile(path, bytes);
  }
}

int Execute(const xforge::Manifest& m, const std::string& report_path) {
  try {
    const Json report = xforge::RunManifest(m);
    if (!report_path.empty()) WriteReport(report_path, report);
    if (!xforge::RunSucceeded(report)) {
      const Json& failed = report["steps"].back();
      std::cerr << Json({{"status", "failed"},
                         {"failed_step", report["failed_step"]},
                         {"error", failed["error"]}})
                       .dump()
                << "\n";
      return 1;
    }
    return 0;
  } catch (const xforge::Error& e) {
    PrintError(e.kind(), e.what());
    if (!report_path.empty()) {
      try {
        WriteReport(report_path,
                    Json({{"status", "failed"},
                          {"error", {{"kind", e.kind()}, {"message", e.what()}}}}));
      } catch (const xforge::Error&) {
      }
    }
    return 2;
  }
}

xforge::Manifest SingleStep(xforge::Step step, int64_t seed) {
  xforge::Manifest m;
  m.seed = seed;
  m.base_dir = ".";
  m.steps.push_back(std::move(step));
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forge: corpus forging and representation analysis toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(xforge::kToolkitVersion));

  // run
  std::string manifest_path;
  std::string run_report;
  auto* run = app.add_subcommand("run", "Execute a manifest");
  run->add_option("manifest", manifest_path, "Manifest JSON")->required();
  run->add_option("--report", run_report, "Write the run report here");

  xforge::Step step;
  Common common;

  // downsample
  std::string dataset;
  int64_t target = 0;
  auto* down = app.add_subcommand("downsample", "Seeded qa down-sampling");
  down->add_option("--dataset", dataset)->required();
  down->add_option("--target", target, "Number of qas to keep")->required();
  AddCommon(down, common);

  // recover
  std::string triples, mode = "train";
  int64_t cap = 10;
  auto* recover = app.add_subcommand("recover", "Recover answer spans in translated triples");
  recover->add_option("--dataset", dataset, "Source dataset")->required();
  recover->add_option("--triples", triples, "Translated triples TSV")->required();
  recover->add_option("--mode", mode)->check(CLI::IsMember({"train", "test"}));
  recover->add_option("--cap", cap);
  AddCommon(recover, common);

  // permute
  std::string policy = "space", table_in, table_out;
  bool allow_fixed = false, invert = false;
  auto* permute = app.add_subcommand("permute", "Build an unseen language by vocabulary permutation");
  permute->add_option("--dataset", dataset)->required();
  permute->add_option("--policy", policy)->check(CLI::IsMember({"space", "cjk", "mixed"}));
  permute->add_flag("--allow-fixed-points", allow_fixed);
  permute->add_option("--table", table_in, "Apply this table instead of building one");
  permute->add_flag("--invert", invert, "Apply the inverse of --table");
  permute->add_option("--table-out", table_out, "Write the table TSV here");
  AddCommon(permute, common);

  // codeswitch
  std::string dict, scope = "both", choice = "first", src_lang = "src", tgt_lang = "tgt";
  std::string cs_policy = "mixed";
  auto* codeswitch = app.add_subcommand("codeswitch", "Dictionary code-switching");
  codeswitch->add_option("--dataset", dataset)->required();
  codeswitch->add_option("--dict", dict, "MUSE dictionary")->required();
  codeswitch->add_option("--scope", scope)->check(CLI::IsMember({"context", "question", "both"}));
  codeswitch->add_option("--choice", choice)->check(CLI::IsMember({"first", "seeded"}));
  codeswitch->add_option("--policy", cs_policy)->check(CLI::IsMember({"space", "cjk", "mixed"}));
  codeswitch->add_option("--src-lang", src_lang);
  codeswitch->add_option("--tgt-lang", tgt_lang);
  AddCommon(codeswitch, common);

  // reorder
  std::string pattern, parses;
  auto* reorder = app.add_subcommand("reorder", "Typology re-linearization");
  reorder->add_option("--dataset", dataset)->required();
  reorder->add_option("--parses", parses, "CoNLL-U parses")->required();
  reorder->add_option("--pattern", pattern)->required();
  reorder->add_option("--mode", mode)->check(CLI::IsMember({"train", "test"}));
  reorder->add_option("--cap", cap);
  AddCommon(reorder, common);

  // eval
  std::string predictions, lang = "mixed";
  auto* eval = app.add_subcommand("eval", "EM/F1 evaluation");
  eval->add_option("--dataset", dataset)->required();
  eval->add_option("--predictions", predictions)->required();
  eval->add_option("--lang", lang)->check(CLI::IsMember({"english", "cjk", "mixed"}));
  AddCommon(eval, common, /*out_required=*/false);

  // analyze
  std::string analysis, x, x_meta, y, y_meta, pairing;
  int64_t components = 2;
  double tau = 0.99, epsilon = 1e-10;
  bool no_pair_check = false;
  auto* analyze = app.add_subcommand("analyze", "Representation analysis");
  analyze->add_option("analysis", analysis)
      ->required()
      ->check(CLI::IsMember({"cosine", "pca", "svcca", "procrustes"}));
  analyze->add_option("--x", x, "REPM file")->required();
  analyze->add_option("--x-meta", x_meta, "Metadata TSV (default: <x>.tsv)");
  analyze->add_option("--y", y, "Second REPM file");
  analyze->add_option("--y-meta", y_meta, "Metadata TSV (default: <y>.tsv)");
  analyze->add_option("--pairing", pairing, "Example pairing TSV for cosine");
  analyze->add_option("--components", components);
  analyze->add_option("--variance-fraction", tau);
  analyze->add_option("--epsilon", epsilon);
  analyze->add_flag("--no-pair-check", no_pair_check);
  AddCommon(analyze, common, /*out_required=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    PrintError("usage", e.what());
    return 2;
  }

  if (run->parsed()) {
    try {
      const std::filesystem::path path(manifest_path);
      const xforge::Manifest m = xforge::ParseManifest(
          xforge::ReadFile(path), path.has_parent_path() ? path.parent_path()
                                                         : std::filesystem::path("."));
      return Execute(m, run_report);
    } catch (const xforge::Error& e) {
      PrintError(e.kind(), e.what());
      return 2;
    }
  }

  const std::string out = common.out.empty() ? "-" : common.out;
  if (down->parsed()) {
    step.kind = "downsample";
    step.inputs = {{"dataset", dataset}};
    step.params = {{"target", target}};
  } else if (recover->parsed()) {
    step.kind = "recover";
    step.inputs = {{"dataset", dataset}, {"triples", triples}};
    step.params = {{"mode", mode}, {"cap", cap}};
  } else if (permute->parsed()) {
    step.kind = "permute";
    step.inputs = {{"dataset", dataset}};
    step.params = {{"policy", policy}, {"allow_fixed_points", allow_fixed}};
    if (!table_in.empty()) {
      step.inputs["table"] = table_in;
      step.params["invert"] = invert;
    }
    if (!table_out.empty()) step.outputs["table"] = table_out;
  } else if (codeswitch->parsed()) {
    step.kind = "codeswitch";
    step.inputs = {{"dataset", dataset}, {"dict", dict}};
    step.params = {{"scope", scope},         {"choice", choice},
                   {"policy", cs_policy},    {"source_lang", src_lang},
                   {"target_lang", tgt_lang}};
  } else if (reorder->parsed()) {
    step.kind = "reorder";
    step.inputs = {{"dataset", dataset}, {"parses", parses}};
    step.params = {{"pattern", pattern}, {"mode", mode}, {"cap", cap}};
  } else if (eval->parsed()) {
    step.kind = "eval";
    step.inputs = {{"dataset", dataset}, {"predictions", predictions}};
    step.params = {{"lang", lang}};
    step.outputs["report"] = out;
  } else if (analyze->parsed()) {
    step.kind = "analyze";
    step.inputs = {{"x", x}, {"x_meta", x_meta.empty() ? x + ".tsv" : x_meta}};
    if (!y.empty()) {
      step.inputs["y"] = y;
      step.inputs["y_meta"] = y_meta.empty() ? y + ".tsv" : y_meta;
    }
    if (!pairing.empty()) step.inputs["pairing"] = pairing;
    step.params = {{"analysis", analysis},
                   {"components", components},
                   {"variance_fraction", tau},
                   {"epsilon", epsilon},
                   {"check_pairing", !no_pair_check}};
    step.outputs["report"] = out;
  }
  if (!step.outputs.contains("report")) step.outputs["dataset"] = out;
  return Execute(SingleStep(std::move(step), common.seed), common.report);
}
