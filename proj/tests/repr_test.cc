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

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "xforge/error.h"
#include "xforge/repr.h"

using namespace xforge;

namespace {

std::vector<RowMeta> Meta(size_t n, const std::string& id = "e") {
  std::vector<RowMeta> meta;
  for (size_t i = 0; i < n; ++i) {
    meta.push_back({id, static_cast<int64_t>(i), "t" + std::to_string(i), i % 2 == 0, "en"});
  }
  return meta;
}

double Mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("repm round trip") {
  Eigen::MatrixXd m(2, 3);
  m << 1.5, -2, 0.25, 3, 4e-3, -7;
  std::vector<RowMeta> meta = Meta(2);
  meta[1].token_text = "熱\tx";
  const ReprMatrix r = ReprMatrix::FromEigen(m, meta);
  const auto [bytes, tsv] = StoreRepresentations(r);
  CHECK(bytes.size() == 4 + 4 + 8 + 8 + 6 * 4);
  CHECK(bytes.substr(0, 4) == "REPM");
  const ReprMatrix back = LoadRepresentations(bytes, tsv);
  CHECK(back == r);
  CHECK(back.at(1, 2) == -7.0f);

  CHECK_THROWS_AS(LoadRepresentations(bytes.substr(0, bytes.size() - 1), tsv), FormatError);
  CHECK_THROWS_AS(LoadRepresentations(bytes.substr(0, 10), tsv), FormatError);
  CHECK_THROWS_AS(LoadRepresentations("XXXX" + bytes.substr(4), tsv), FormatError);
  CHECK_THROWS_AS(LoadRepresentations(bytes, tsv.substr(0, tsv.rfind('\n', tsv.size() - 2) + 1)),
                  FormatError);

  const ReprMatrix empty = ReprMatrix::FromEigen(Eigen::MatrixXd(0, 3), {});
  const auto [eb, et] = StoreRepresentations(empty);
  const ReprMatrix e2 = LoadRepresentations(eb, et);
  CHECK(e2.n == 0);
  CHECK(e2.d == 3);
}

TEST_CASE("answer span cosine") {
  // Even rows are in the answer span.
  Eigen::MatrixXd x(6, 2), y(6, 2);
  x << 1, 0, 100, 100, 3, 0, 0, 2, 1, 2, -5, 9;
  y << 1, 1, 0, 0, 0, 5, 7, 7, 2, -1, 0, 0;
  std::vector<RowMeta> xm, ym;
  const std::vector<std::string> xid = {"a", "a", "a", "b", "c", "c"};
  const std::vector<std::string> yid = {"A", "A", "B", "B", "C", "C"};
  const std::vector<bool> xin = {true, false, true, true, true, false};
  const std::vector<bool> yin = {true, false, true, false, true, false};
  for (int i = 0; i < 6; ++i) {
    xm.push_back({xid[i], i, "t", xin[i], "en"});
    ym.push_back({yid[i], i, "t", yin[i], "zh"});
  }
  const ReprMatrix rx = ReprMatrix::FromEigen(x, xm);
  const ReprMatrix ry = ReprMatrix::FromEigen(y, ym);
  const std::map<std::string, std::string> pairing = {
      {"a", "A"}, {"b", "B"}, {"c", "C"}, {"d", "D"}};
  const CosineReport r = AnswerSpanCosine(rx, ry, pairing);
  REQUIRE(r.cosines.size() == 3);
  // a: mean(1,0 ; 3,0) = (2,0) vs (1,1). b: (0,2) vs (0,5). c: (1,2) vs (2,-1).
  CHECK(std::abs(r.cosines[0] - 2.0 / (2.0 * std::sqrt(2.0))) < 1e-12);
  CHECK(std::abs(r.cosines[1] - 1.0) < 1e-12);
  CHECK(std::abs(r.cosines[2]) < 1e-12);
  CHECK(std::abs(r.mean - (1.0 / std::sqrt(2.0) + 1.0) / 3.0) < 1e-12);
  CHECK(r.skipped.size() == 1);

  const CosineReport scaled =
      AnswerSpanCosine(ReprMatrix::FromEigen(x * 3.5, xm), ry, pairing);
  for (size_t i = 0; i < 3; ++i) CHECK(std::abs(scaled.cosines[i] - r.cosines[i]) < 1e-6);

  const CosineReport self = AnswerSpanCosine(rx, rx, {{"a", "a"}, {"b", "b"}, {"c", "c"}});
  for (double c : self.cosines) CHECK(std::abs(c - 1.0) < 1e-12);
}

TEST_CASE("pca") {
  Eigen::MatrixXd line(4, 3);
  for (int i = 0; i < 4; ++i) line.row(i) = Eigen::RowVector3d(1, 2, -1) * (i - 1.0);
  const PcaResult l = PcaProject(line, 1);
  CHECK(std::abs(l.explained_ratio(0) - 1.0) < 1e-12);

  Eigen::MatrixXd pair(2, 3);
  pair << 3, 4, 0, -3, -4, 0;
  const PcaResult p = PcaProject(pair, 1);
  CHECK(std::abs(std::abs(p.coordinates(0, 0)) - 5.0) < 1e-12);
  CHECK(std::abs(p.coordinates(0, 0) + p.coordinates(1, 0)) < 1e-12);
  // Largest loading is positive.
  Eigen::Index arg;
  p.loadings.col(0).cwiseAbs().maxCoeff(&arg);
  CHECK(p.loadings(arg, 0) > 0);

  std::mt19937_64 rng(3);
  const Eigen::MatrixXd x = oracle::RandomGaussian(rng, 20, 5);
  const PcaResult full = PcaProject(x, 5);
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  CHECK((full.coordinates * full.loadings.transpose() - centered).norm() < 1e-10);
  CHECK((full.loadings.transpose() * full.loadings -
         Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-10);
  CHECK(std::abs(full.explained_ratio.sum() - 1.0) < 1e-12);

  const Eigen::MatrixXd moved = x.rowwise() + Eigen::RowVectorXd::Constant(5, 42.0);
  CHECK((PcaProject(moved, 2).coordinates - PcaProject(x, 2).coordinates).norm() < 1e-10);

  const PcaResult reduced = PcaProject(line, 3);
  CHECK(reduced.coordinates.cols() == 1);
  CHECK_FALSE(reduced.warnings.empty());
  CHECK_THROWS_AS(PcaProject(Eigen::MatrixXd::Ones(1, 3)), ArgumentError);
}

TEST_CASE("kept dimensions") {
  Eigen::VectorXd s(3);
  s << 3, 1, 0.1;  // squares 9, 1, 0.01
  CHECK(KeptDimensions(s, 0.5) == 1);
  CHECK(KeptDimensions(s, 0.89) == 1);
  CHECK(KeptDimensions(s, 0.95) == 2);
  CHECK(KeptDimensions(s, 1.0) == 3);
}

TEST_CASE("svcca") {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXd x = oracle::RandomGaussian(rng, 50, 8);

  const SvccaResult self = Svcca(x, x);
  CHECK(std::abs(self.mean_correlation - 1.0) < 1e-9);
  for (double c : self.correlations) CHECK(c <= 1.0);

  const Eigen::MatrixXd q = oracle::RandomOrthogonal(rng, 8);
  CHECK(std::abs(Svcca(x, x * q).mean_correlation - 1.0) < 1e-6);

  SUBCASE("full variance matches the generalized eigenproblem") {
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::MatrixXd a = oracle::RandomGaussian(rng, 50, 8);
      const Eigen::MatrixXd b = oracle::RandomGaussian(rng, 50, 6);
      const SvccaResult r = Svcca(a, b, {1.0, 1e-10});
      const std::vector<double> expect = oracle::CanonicalCorrelations(a, b);
      REQUIRE(r.correlations.size() == expect.size());
      for (size_t i = 0; i < expect.size(); ++i) {
        CHECK(std::abs(r.correlations[i] - expect[i]) < 1e-6);
      }
      CHECK(std::abs(r.mean_correlation - Mean(expect)) < 1e-6);
    }
  }

  SUBCASE("variance truncation matches reduce-then-CCA") {
    for (int trial = 0; trial < 20; ++trial) {
      // Low-rank signal plus small noise so truncation bites.
      const Eigen::MatrixXd a = oracle::RandomGaussian(rng, 50, 3) *
                                    oracle::RandomGaussian(rng, 3, 8) +
                                0.01 * oracle::RandomGaussian(rng, 50, 8);
      const Eigen::MatrixXd b = oracle::RandomGaussian(rng, 50, 6);
      const SvccaResult r = Svcca(a, b);
      const Eigen::MatrixXd ra = oracle::ScatterReduce(a, 0.99);
      const Eigen::MatrixXd rb = oracle::ScatterReduce(b, 0.99);
      CHECK(r.kept_x == static_cast<size_t>(ra.cols()));
      CHECK(r.kept_y == static_cast<size_t>(rb.cols()));
      CHECK(r.kept_x < 8);
      const std::vector<double> expect = oracle::CanonicalCorrelations(ra, rb);
      CHECK(std::abs(r.mean_correlation - Mean(expect)) < 1e-6);
    }
  }

  SUBCASE("invertible per-side transforms") {
    const Eigen::MatrixXd b = oracle::RandomGaussian(rng, 50, 6);
    const Eigen::MatrixXd ta = oracle::RandomGaussian(rng, 8, 8) +
                               3 * Eigen::MatrixXd::Identity(8, 8);
    const SvccaConfig full{1.0, 1e-10};
    CHECK(std::abs(Svcca(x * ta, b, full).mean_correlation -
                   Svcca(x, b, full).mean_correlation) < 1e-6);
  }

  SUBCASE("degenerate inputs") {
    const SvccaResult zero = Svcca(Eigen::MatrixXd::Zero(10, 3), x.topRows(10));
    CHECK(zero.correlations == std::vector<double>(3, 0.0));
    CHECK(zero.mean_correlation == 0.0);
    CHECK_FALSE(zero.warnings.empty());
    CHECK_THROWS_AS(Svcca(x, x.topRows(10)), ArgumentError);
    CHECK_THROWS_AS(Svcca(x, x, {0.0, 1e-10}), ArgumentError);
    CHECK_FALSE(Svcca(x.topRows(5), x.topRows(5)).warnings.empty());
  }
}

TEST_CASE("procrustes") {
  std::mt19937_64 rng(17);
  const Eigen::MatrixXd x = oracle::RandomGaussian(rng, 40, 6);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(6, 6);

  const LinearMap self = ProcrustesAlign(x, x);
  CHECK((self.matrix - id).norm() < 1e-10);
  CHECK(self.residual < 1e-10);
  CHECK(self.orthogonal);

  const Eigen::MatrixXd q = oracle::RandomOrthogonal(rng, 6);
  const LinearMap planted = ProcrustesAlign(x, x * q);
  CHECK((planted.matrix - q).norm() < 1e-8);
  CHECK(planted.residual < 1e-8);
  CHECK((planted.matrix.transpose() * planted.matrix - id).norm() < 1e-8);

  const Eigen::MatrixXd y = x * q + 0.1 * oracle::RandomGaussian(rng, 40, 6);
  const LinearMap noisy = ProcrustesAlign(x, y);
  const Eigen::MatrixXd polar = oracle::PolarProcrustes(x, y);
  CHECK((noisy.matrix - polar).norm() < 1e-8);
  CHECK(std::abs(noisy.residual - (x * polar - y).norm()) < 1e-8);
  CHECK((noisy.matrix.transpose() * noisy.matrix - id).norm() < 1e-8);
  // Unconstrained least squares can only do better.
  const Eigen::MatrixXd ls = x.colPivHouseholderQr().solve(y);
  CHECK((x * ls - y).norm() <= noisy.residual + 1e-12);

  CHECK_THROWS_AS(ProcrustesAlign(x, x.leftCols(3)), ArgumentError);
  const LinearMap low = ProcrustesAlign(x.leftCols(1) * Eigen::RowVectorXd::Ones(6), x);
  CHECK_FALSE(low.warnings.empty());
  CHECK((low.matrix.transpose() * low.matrix - id).norm() < 1e-8);
}
