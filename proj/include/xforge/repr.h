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

// Analysis of exported token representations: answer-span cosine, PCA,
// SVCCA and orthogonal Procrustes.

#ifndef XFORGE_REPR_H_
#define XFORGE_REPR_H_

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xforge {

struct RowMeta {
  std::string example_id;
  int64_t token_index = 0;
  std::string token_text;
  bool in_answer_span = false;
  std::string language;

  bool operator==(const RowMeta&) const = default;
};

// n x d row-major float32 values with one metadata record per row.
struct ReprMatrix {
  size_t n = 0;
  size_t d = 0;
  std::vector<float> values;
  std::vector<RowMeta> meta;

  float at(size_t row, size_t col) const { return values[row * d + col]; }
  Eigen::MatrixXd ToEigen() const;
  static ReprMatrix FromEigen(const Eigen::MatrixXd& m,
                              std::vector<RowMeta> meta);

  bool operator==(const ReprMatrix&) const = default;
};

// Binary layout: "REPM", u32 version (1), u64 n, u64 d, then n*d
// little-endian float32 values, row-major. Metadata is a TSV sidecar with
// columns row_index, example_id, token_index, token_text, in_answer_span,
// language. Throws FormatError on any mismatch.
ReprMatrix LoadRepresentations(std::string_view repm, std::string_view meta_tsv);
std::pair<std::string, std::string> StoreRepresentations(const ReprMatrix& m);

// --- answer-span cosine -----------------------------------------------------

struct CosineReport {
  std::vector<std::pair<std::string, std::string>> pairs;  // scored pairs
  std::vector<double> cosines;
  double mean = 0.0;
  std::vector<std::pair<std::string, std::string>> skipped;
};

// Mean-pools the answer-span rows of each paired example and takes the
// cosine. Pairs lacking answer rows on either side are skipped.
CosineReport AnswerSpanCosine(const ReprMatrix& x, const ReprMatrix& y,
                              const std::map<std::string, std::string>& pairing);

// --- PCA --------------------------------------------------------------------

struct PcaResult {
  Eigen::MatrixXd coordinates;        // n x components
  Eigen::MatrixXd loadings;           // d x components, orthonormal columns
  Eigen::VectorXd explained_ratio;    // fraction of total variance
  Eigen::RowVectorXd mean;
  std::vector<std::string> warnings;
};

// Column-centers, takes the thin SVD and projects onto the leading
// components. Each component is signed so that its largest-magnitude
// loading is positive. Requests beyond the numerical rank are reduced.
PcaResult PcaProject(const Eigen::MatrixXd& x, size_t components = 2);

// --- SVCCA ------------------------------------------------------------------

struct SvccaConfig {
  double variance_fraction = 0.99;  // in (0, 1]
  double epsilon = 1e-10;           // ridge added before whitening
};

struct SvccaResult {
  std::vector<double> correlations;  // descending, in [0, 1]
  double mean_correlation = 0.0;
  size_t kept_x = 0;
  size_t kept_y = 0;
  std::vector<std::string> warnings;
};

// Rows of x and y are paired by position.
SvccaResult Svcca(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                  const SvccaConfig& cfg = {});

// Number of leading singular directions whose squared singular values reach
// `fraction` of the total.
size_t KeptDimensions(const Eigen::VectorXd& singular_values, double fraction);

// --- Procrustes -------------------------------------------------------------

struct LinearMap {
  Eigen::MatrixXd matrix;
  bool orthogonal = false;
  double residual = 0.0;  // ||x W - y||_F
  std::vector<std::string> warnings;
};

// Orthogonal W minimizing ||x W - y||_F, from the SVD of x^T y.
LinearMap ProcrustesAlign(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

}  // namespace xforge

#endif  // XFORGE_REPR_H_
