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

// Declarative multi-step pipelines. A manifest is a JSON document:
//
//   {
//     "version": "0.1.0",            // optional toolkit stamp
//     "seed": 13,                    // default seed for seeded steps
//     "steps": [
//       {"kind": "permute",
//        "inputs": {"dataset": "squad.json"},
//        "outputs": {"dataset": "perm.json", "table": "perm.tsv"},
//        "params": {"policy": "space"}},
//       ...
//     ]
//   }
//
// Relative paths resolve against the manifest's directory.

#ifndef XFORGE_MANIFEST_H_
#define XFORGE_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace xforge {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

struct Step {
  std::string kind;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> outputs;
};

struct Manifest {
  std::vector<Step> steps;
  int64_t seed = 0;
  std::string version{kToolkitVersion};
  std::filesystem::path base_dir = ".";

  std::filesystem::path Resolve(const std::string& path) const;
};

// Throws ParseError for a document that is not a manifest.
Manifest ParseManifest(std::string_view bytes,
                       const std::filesystem::path& base_dir);

// Checks kinds, required inputs/outputs, parameter types and domains, and
// that every input exists on disk or is produced by an earlier step. Throws
// ValidationError naming the step.
void ValidateManifest(const Manifest& m);

// Validates, then runs the steps in order. A failing step stops the run;
// outputs of earlier steps stay on disk and the report records the failure.
// The report holds no timestamps, so equal inputs give equal bytes.
nlohmann::ordered_json RunManifest(const Manifest& m);

// True when every step of a report succeeded.
bool RunSucceeded(const nlohmann::ordered_json& report);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view bytes);

}  // namespace xforge

#endif  // XFORGE_MANIFEST_H_
