#include "featshift/preprocess.hpp"

#include <cmath>
#include <limits>

#include "featshift/error.hpp"

namespace featshift {

Matrix difference_series(const Matrix& series) {
  if (series.rows() < 2) throw InsufficientDataError("difference_series: need at least 2 rows");
  const Eigen::Index n = series.rows() - 1;
  return series.bottomRows(n) - series.topRows(n);
}

double yeo_johnson(double x, double lambda) {
  constexpr double eps = 1e-12;
  if (x >= 0.0) {
    if (std::abs(lambda) < eps) return std::log1p(x);
    return std::expm1(lambda * std::log1p(x)) / lambda;
  }
  if (std::abs(lambda - 2.0) < eps) return -std::log1p(-x);
  return -std::expm1((2.0 - lambda) * std::log1p(-x)) / (2.0 - lambda);
}

double yeo_johnson_log_likelihood(const Vector& values, double lambda) {
  const auto n = static_cast<double>(values.size());
  Vector t(values.size());
  double jacobian = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double x = values(i);
    t(i) = yeo_johnson(x, lambda);
    jacobian += std::copysign(1.0, x) * std::log1p(std::abs(x));
  }
  const double mean = t.mean();
  const double var = (t.array() - mean).square().sum() / n;
  if (!(var > 0.0) || !std::isfinite(var)) return -std::numeric_limits<double>::infinity();
  return -0.5 * n * std::log(var) + (lambda - 1.0) * jacobian;
}

double yeo_johnson_fit(const Vector& values) {
  if (values.size() < 10) throw InsufficientDataError("yeo_johnson_fit: need at least 10 values");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = -5.0;
  double b = 5.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = yeo_johnson_log_likelihood(values, c);
  double fd = yeo_johnson_log_likelihood(values, d);
  while (b - a > 1e-4) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = yeo_johnson_log_likelihood(values, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = yeo_johnson_log_likelihood(values, d);
    }
  }
  return 0.5 * (a + b);
}

Preprocessor Preprocessor::fit(const Matrix& reference, const PreprocessFlags& flags) {
  if (!all_finite(reference)) throw InvalidDataError("Preprocessor::fit: non-finite input");
  Preprocessor p;
  p.flags_ = flags;
  const Eigen::Index d = reference.cols();
  Matrix work = reference;
  if (flags.power_transform) {
    p.lambdas_.resize(static_cast<std::size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j) {
      const double lambda = yeo_johnson_fit(work.col(j));
      p.lambdas_[static_cast<std::size_t>(j)] = lambda;
      work.col(j) = work.col(j).unaryExpr([lambda](double x) { return yeo_johnson(x, lambda); });
    }
  }
  if (flags.standardize) {
    if (reference.rows() < 2) throw InsufficientDataError("Preprocessor::fit: need at least 2 rows");
    p.means_ = work.colwise().mean().transpose();
    p.scales_.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      const double var = (work.col(j).array() - p.means_(j)).square().mean();
      p.scales_(j) = var > 0.0 ? std::sqrt(var) : 1.0;
    }
  }
  return p;
}

Matrix Preprocessor::apply(const Matrix& data) const {
  Matrix out = data;
  if (flags_.power_transform) {
    if (static_cast<std::size_t>(out.cols()) != lambdas_.size()) throw ShapeError("Preprocessor::apply: width mismatch");
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      const double lambda = lambdas_[static_cast<std::size_t>(j)];
      out.col(j) = out.col(j).unaryExpr([lambda](double x) { return yeo_johnson(x, lambda); });
    }
  }
  if (flags_.standardize) {
    if (out.cols() != means_.size()) throw ShapeError("Preprocessor::apply: width mismatch");
    out = (out.rowwise() - means_.transpose()).array().rowwise() / scales_.transpose().array();
  }
  return out;
}

}  // namespace featshift
