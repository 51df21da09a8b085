#include "featshift/numeric.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>

#include "featshift/error.hpp"

namespace featshift {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw InvalidArgumentError("normal_quantile: p outside [0, 1]");
  }
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

Matrix gather_rows(const Matrix& m, std::span<const std::size_t> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

Matrix slice_rows(const Matrix& m, std::size_t begin, std::size_t end) {
  if (end < begin || end > static_cast<std::size_t>(m.rows())) {
    throw ShapeError("slice_rows: range out of bounds");
  }
  return m.middleRows(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(end - begin));
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  if (top.cols() != bottom.cols()) throw ShapeError("vstack: column count mismatch");
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

Vector column_means(const Matrix& data) { return data.colwise().mean().transpose(); }

Matrix sample_covariance(const Matrix& data, const Vector& mean) {
  const Matrix centered = data.rowwise() - mean.transpose();
  Matrix cov = Matrix::Zero(data.cols(), data.cols());
  cov.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
  cov = cov.selfadjointView<Eigen::Lower>();
  return cov / static_cast<double>(data.rows() - 1);
}

std::optional<double> spd_log_det(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const auto diag = llt.matrixLLT().diagonal();
  if ((diag.array() <= 0.0).any()) return std::nullopt;
  return 2.0 * diag.array().log().sum();
}

Matrix principal_submatrix(const Matrix& m, std::span<const std::size_t> idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Matrix out(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      out(i, j) = m(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]),
                    static_cast<Eigen::Index>(idx[static_cast<std::size_t>(j)]));
    }
  }
  return out;
}

IndexList complement(std::span<const std::size_t> set, std::size_t d) {
  std::vector<bool> in(d, false);
  for (auto j : set) {
    if (j >= d) throw InvalidArgumentError("complement: index out of range");
    in[j] = true;
  }
  IndexList out;
  for (std::size_t j = 0; j < d; ++j) {
    if (!in[j]) out.push_back(j);
  }
  return out;
}

}  // namespace featshift
