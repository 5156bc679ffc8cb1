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

#include "xforge/repr.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>

#include "xforge/error.h"
#include "xforge/tsv.h"

namespace xforge {
namespace {

constexpr char kMagic[4] = {'R', 'E', 'P', 'M'};
constexpr uint32_t kVersion = 1;
constexpr size_t kHeaderBytes = 4 + 4 + 8 + 8;

template <typename T>
void PutLe(T value, std::string& out) {
  for (size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

template <typename T>
T GetLe(std::string_view bytes, size_t offset) {
  T value = 0;
  for (size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(static_cast<unsigned char>(bytes[offset + i]))
             << (8 * i);
  }
  return value;
}

Eigen::MatrixXd Centered(const Eigen::MatrixXd& x) {
  return x.rowwise() - x.colwise().mean();
}

size_t NumericalRank(const Eigen::VectorXd& s, Eigen::Index rows,
                     Eigen::Index cols) {
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  const double tol = static_cast<double>(std::max(rows, cols)) *
                     std::numeric_limits<double>::epsilon() * s(0);
  size_t r = 0;
  while (r < static_cast<size_t>(s.size()) && s(r) > tol) ++r;
  return r;
}

Eigen::MatrixXd InverseSqrt(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  return eig.operatorInverseSqrt();
}

}  // namespace

Eigen::MatrixXd ReprMatrix::ToEigen() const {
  Eigen::MatrixXd m(n, d);
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < d; ++c) m(r, c) = values[r * d + c];
  }
  return m;
}

ReprMatrix ReprMatrix::FromEigen(const Eigen::MatrixXd& m,
                                 std::vector<RowMeta> meta) {
  ReprMatrix out;
  out.n = static_cast<size_t>(m.rows());
  out.d = static_cast<size_t>(m.cols());
  out.values.resize(out.n * out.d);
  for (size_t r = 0; r < out.n; ++r) {
    for (size_t c = 0; c < out.d; ++c) {
      out.values[r * out.d + c] = static_cast<float>(m(r, c));
    }
  }
  out.meta = std::move(meta);
  if (out.meta.size() != out.n) out.meta.resize(out.n);
  return out;
}

ReprMatrix LoadRepresentations(std::string_view repm,
                               std::string_view meta_tsv) {
  if (repm.size() < kHeaderBytes) throw FormatError("REPM header truncated");
  if (std::memcmp(repm.data(), kMagic, 4) != 0) {
    throw FormatError("bad REPM magic");
  }
  const auto version = GetLe<uint32_t>(repm, 4);
  if (version != kVersion) {
    throw FormatError("unsupported REPM version " + std::to_string(version));
  }
  ReprMatrix m;
  m.n = GetLe<uint64_t>(repm, 8);
  m.d = GetLe<uint64_t>(repm, 16);
  if (m.d == 0) throw FormatError("REPM column count must be positive");
  if (m.n > (std::numeric_limits<uint64_t>::max() / 4) / m.d ||
      repm.size() - kHeaderBytes != m.n * m.d * 4) {
    throw FormatError("REPM payload has " +
                      std::to_string(repm.size() - kHeaderBytes) +
                      " bytes, expected " + std::to_string(m.n * m.d * 4));
  }
  m.values.resize(m.n * m.d);
  for (size_t i = 0; i < m.values.size(); ++i) {
    const float v =
        std::bit_cast<float>(GetLe<uint32_t>(repm, kHeaderBytes + 4 * i));
    if (!std::isfinite(v)) {
      throw FormatError("non-finite value at row " + std::to_string(i / m.d));
    }
    m.values[i] = v;
  }

  const auto lines = tsv::SplitLines(meta_tsv);
  size_t row = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    if (i == 0 && lines[i].starts_with("row_index\t")) continue;
    const auto f = tsv::SplitFields(lines[i]);
    const std::string where = "metadata line " + std::to_string(i + 1);
    if (f.size() != 6) throw FormatError(where + ": expected 6 columns");
    size_t index = 0;
    int64_t token_index = 0;
    auto parse_ok = [](std::string_view s, auto& v) {
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      return ec == std::errc() && p == s.data() + s.size();
    };
    if (!parse_ok(f[0], index) || index != row) {
      throw FormatError(where + ": row_index must be " + std::to_string(row));
    }
    if (!parse_ok(f[2], token_index)) {
      throw FormatError(where + ": bad token_index");
    }
    if (f[4] != "0" && f[4] != "1") {
      throw FormatError(where + ": in_answer_span must be 0 or 1");
    }
    try {
      m.meta.push_back({tsv::Unescape(f[1]), token_index, tsv::Unescape(f[3]),
                        f[4] == "1", tsv::Unescape(f[5])});
    } catch (const ParseError& e) {
      throw FormatError(where + ": " + e.what());
    }
    ++row;
  }
  if (m.meta.size() != m.n) {
    throw FormatError("metadata has " + std::to_string(m.meta.size()) +
                      " rows, matrix has " + std::to_string(m.n));
  }
  return m;
}

std::pair<std::string, std::string> StoreRepresentations(const ReprMatrix& m) {
  if (m.values.size() != m.n * m.d || m.meta.size() != m.n) {
    throw ArgumentError("ReprMatrix shape does not match its contents");
  }
  std::string bin(kMagic, 4);
  PutLe<uint32_t>(kVersion, bin);
  PutLe<uint64_t>(m.n, bin);
  PutLe<uint64_t>(m.d, bin);
  bin.reserve(kHeaderBytes + 4 * m.values.size());
  for (float v : m.values) PutLe<uint32_t>(std::bit_cast<uint32_t>(v), bin);

  std::string meta =
      "row_index\texample_id\ttoken_index\ttoken_text\tin_answer_span\tlanguage\n";
  for (size_t r = 0; r < m.n; ++r) {
    const RowMeta& rm = m.meta[r];
    meta += std::to_string(r) + '\t' + tsv::Escape(rm.example_id) + '\t' +
            std::to_string(rm.token_index) + '\t' + tsv::Escape(rm.token_text) +
            '\t' + (rm.in_answer_span ? "1" : "0") + '\t' +
            tsv::Escape(rm.language) + '\n';
  }
  return {std::move(bin), std::move(meta)};
}

CosineReport AnswerSpanCosine(
    const ReprMatrix& x, const ReprMatrix& y,
    const std::map<std::string, std::string>& pairing) {
  if (x.d != y.d) {
    throw ArgumentError("cosine needs equal widths, got " +
                        std::to_string(x.d) + " and " + std::to_string(y.d));
  }
  auto pool = [](const ReprMatrix& m, const std::string& id,
                 Eigen::VectorXd& out) {
    out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.d));
    size_t count = 0;
    for (size_t r = 0; r < m.n; ++r) {
      if (!m.meta[r].in_answer_span || m.meta[r].example_id != id) continue;
      for (size_t c = 0; c < m.d; ++c) out(c) += m.at(r, c);
      ++count;
    }
    if (count > 0) out /= static_cast<double>(count);
    return count > 0;
  };
  CosineReport report;
  Eigen::VectorXd u, v;
  for (const auto& [xid, yid] : pairing) {
    if (!pool(x, xid, u) || !pool(y, yid, v)) {
      report.skipped.emplace_back(xid, yid);
      continue;
    }
    const double denom = u.norm() * v.norm();
    report.pairs.emplace_back(xid, yid);
    report.cosines.push_back(denom > 0.0 ? u.dot(v) / denom : 0.0);
  }
  if (!report.cosines.empty()) {
    double sum = 0.0;
    for (double c : report.cosines) sum += c;
    report.mean = sum / static_cast<double>(report.cosines.size());
  }
  return report;
}

PcaResult PcaProject(const Eigen::MatrixXd& x, size_t components) {
  if (x.rows() < 2) throw ArgumentError("PCA needs at least two rows");
  PcaResult out;
  out.mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - out.mean;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const size_t rank = NumericalRank(s, centered.rows(), centered.cols());
  size_t k = components;
  if (k > rank) {
    out.warnings.push_back("requested " + std::to_string(components) +
                           " components, data rank is " +
                           std::to_string(rank));
    k = rank;
  }
  const auto kk = static_cast<Eigen::Index>(k);
  out.loadings = svd.matrixV().leftCols(kk);
  Eigen::MatrixXd scores = svd.matrixU().leftCols(kk) *
                           s.head(kk).asDiagonal();
  for (Eigen::Index c = 0; c < kk; ++c) {
    Eigen::Index arg = 0;
    out.loadings.col(c).cwiseAbs().maxCoeff(&arg);
    if (out.loadings(arg, c) < 0.0) {
      out.loadings.col(c) *= -1.0;
      scores.col(c) *= -1.0;
    }
  }
  out.coordinates = std::move(scores);
  const double total = s.squaredNorm();
  out.explained_ratio = Eigen::VectorXd::Zero(kk);
  if (total > 0.0) {
    out.explained_ratio = s.head(kk).cwiseAbs2() / total;
  }
  return out;
}

size_t KeptDimensions(const Eigen::VectorXd& singular_values,
                      double fraction) {
  const double total = singular_values.squaredNorm();
  if (total <= 0.0) return 0;
  const double goal = fraction * total * (1.0 - 1e-12);
  double cumulative = 0.0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    cumulative += singular_values(i) * singular_values(i);
    if (cumulative >= goal) return static_cast<size_t>(i + 1);
  }
  return static_cast<size_t>(singular_values.size());
}

SvccaResult Svcca(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                  const SvccaConfig& cfg) {
  if (x.rows() != y.rows()) {
    throw ArgumentError("SVCCA needs paired rows, got " +
                        std::to_string(x.rows()) + " and " +
                        std::to_string(y.rows()));
  }
  if (!(cfg.variance_fraction > 0.0 && cfg.variance_fraction <= 1.0)) {
    throw ArgumentError("variance fraction must lie in (0, 1]");
  }
  if (x.rows() < 2) throw ArgumentError("SVCCA needs at least two rows");
  SvccaResult out;
  const Eigen::Index n = x.rows();
  if (n <= std::max(x.cols(), y.cols())) {
    out.warnings.push_back("fewer rows than dimensions; correlations are "
                           "biased towards 1");
  }

  // SV step: keep the leading directions carrying the requested variance.
  auto reduce = [&](const Eigen::MatrixXd& m, size_t& kept) {
    const Eigen::MatrixXd c = Centered(m);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeThinU);
    const Eigen::VectorXd& s = svd.singularValues();
    kept = std::min(KeptDimensions(s, cfg.variance_fraction),
                    NumericalRank(s, c.rows(), c.cols()));
    const auto k = static_cast<Eigen::Index>(kept);
    return Eigen::MatrixXd(svd.matrixU().leftCols(k) * s.head(k).asDiagonal());
  };
  const Eigen::MatrixXd rx = reduce(x, out.kept_x);
  const Eigen::MatrixXd ry = reduce(y, out.kept_y);

  if (out.kept_x == 0 || out.kept_y == 0) {
    out.warnings.push_back("one side has no variance; correlations are 0");
    out.correlations.assign(
        static_cast<size_t>(std::min(x.cols(), y.cols())), 0.0);
    return out;
  }

  // CCA step: whiten each side and take the singular values of the
  // whitened cross-covariance.
  const double scale = 1.0 / static_cast<double>(n - 1);
  const Eigen::MatrixXd sxx =
      scale * rx.transpose() * rx +
      cfg.epsilon * Eigen::MatrixXd::Identity(rx.cols(), rx.cols());
  const Eigen::MatrixXd syy =
      scale * ry.transpose() * ry +
      cfg.epsilon * Eigen::MatrixXd::Identity(ry.cols(), ry.cols());
  const Eigen::MatrixXd sxy = scale * rx.transpose() * ry;
  const Eigen::MatrixXd whitened = InverseSqrt(sxx) * sxy * InverseSqrt(syy);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(whitened);
  const Eigen::VectorXd& rho = svd.singularValues();

  double sum = 0.0;
  for (Eigen::Index i = 0; i < rho.size(); ++i) {
    const double r = std::clamp(rho(i), 0.0, 1.0);
    out.correlations.push_back(r);
    sum += r;
  }
  out.mean_correlation = sum / static_cast<double>(out.correlations.size());
  return out;
}

LinearMap ProcrustesAlign(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw ArgumentError("Procrustes needs equal shapes");
  }
  LinearMap out;
  const Eigen::MatrixXd cross = x.transpose() * y;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const size_t rank =
      NumericalRank(svd.singularValues(), cross.rows(), cross.cols());
  if (rank < static_cast<size_t>(cross.cols())) {
    out.warnings.push_back("x^T y has rank " + std::to_string(rank) + " < " +
                           std::to_string(cross.cols()) +
                           "; the orthogonal map is not unique");
  }
  if (x.rows() < x.cols()) {
    out.warnings.push_back("fewer anchor rows than dimensions");
  }
  out.matrix = svd.matrixU() * svd.matrixV().transpose();
  out.orthogonal = true;
  out.residual = (x * out.matrix - y).norm();
  return out;
}

}  // namespace xforge
