#include "featshift/gaussian.hpp"

#include <cmath>
#include <string>

#include "featshift/error.hpp"

namespace featshift {

namespace {

struct Factorization {
  Matrix chol;
  Matrix precision;
  double log_det;
};

// Rejects numerically singular factors as well as outright failures: a pivot
// below 1e-12 of the largest variance would make the precision meaningless.
std::optional<Factorization> factor_spd(const Matrix& cov) {
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) return std::nullopt;
  Matrix chol = llt.matrixL();
  const Vector diag = chol.diagonal();
  const double max_var = cov.diagonal().maxCoeff();
  if ((diag.array() <= 0.0).any() || diag.array().square().minCoeff() <= 1e-12 * max_var) {
    return std::nullopt;
  }
  Matrix precision = llt.solve(Matrix::Identity(cov.rows(), cov.cols()));
  precision = 0.5 * (precision + precision.transpose()).eval();
  return Factorization{std::move(chol), std::move(precision), 2.0 * diag.array().log().sum()};
}

void check_dim(const GaussianModel& model, Eigen::Index n, const char* op) {
  if (static_cast<std::size_t>(n) != model.dim()) {
    throw ShapeError(std::string(op) + ": expected length " + std::to_string(model.dim()) +
                     ", got " + std::to_string(n));
  }
}

}  // namespace

GaussianModel GaussianModel::from_moments(Vector mean, Matrix covariance) {
  if (covariance.rows() != covariance.cols() || covariance.rows() != mean.size()) {
    throw ShapeError("GaussianModel: mean/covariance shape mismatch");
  }
  if (!mean.allFinite() || !covariance.allFinite()) {
    throw InvalidDataError("GaussianModel: non-finite parameters");
  }
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidDataError("GaussianModel: covariance is not symmetric");
  }
  auto f = factor_spd(covariance);
  if (!f) throw InvalidDataError("GaussianModel: covariance is not positive definite");
  GaussianModel m;
  m.mean_ = std::move(mean);
  m.covariance_ = std::move(covariance);
  m.chol_ = std::move(f->chol);
  m.precision_ = std::move(f->precision);
  m.log_det_ = f->log_det;
  return m;
}

GaussianModel fit_gaussian(const Matrix& data, double ridge) {
  if (data.rows() < 2) throw InsufficientDataError("fit_gaussian: need at least 2 rows");
  if (data.cols() < 1) throw ShapeError("fit_gaussian: need at least 1 column");
  if (!data.allFinite()) throw InvalidDataError("fit_gaussian: non-finite input");
  if (ridge < 0.0) throw InvalidArgumentError("fit_gaussian: ridge must be >= 0");

  GaussianModel m;
  m.mean_ = column_means(data);
  const Matrix raw = sample_covariance(data, m.mean_);
  const auto identity = Matrix::Identity(raw.rows(), raw.cols());

  double applied = ridge;
  auto f = factor_spd(raw + applied * identity);
  for (double extra = 1e-6; !f; extra *= 10.0) {
    if (extra > 1e12) throw InvalidDataError("fit_gaussian: covariance could not be regularized");
    applied = ridge + extra;
    f = factor_spd(raw + applied * identity);
  }
  m.covariance_ = raw + applied * identity;
  m.chol_ = std::move(f->chol);
  m.precision_ = std::move(f->precision);
  m.log_det_ = f->log_det;
  m.ridge_ = applied;
  return m;
}

double gaussian_log_density(const GaussianModel& model, const Vector& x) {
  check_dim(model, x.size(), "gaussian_log_density");
  const Vector w = model.chol().triangularView<Eigen::Lower>().solve(x - model.mean());
  const double d = static_cast<double>(model.dim());
  return -0.5 * w.squaredNorm() - 0.5 * (d * kLogTwoPi + model.log_det_covariance());
}

Vector gaussian_score(const GaussianModel& model, const Vector& x) {
  check_dim(model, x.size(), "gaussian_score");
  return -(model.precision() * (x - model.mean()));
}

Matrix gaussian_scores(const GaussianModel& model, const Matrix& points) {
  check_dim(model, points.cols(), "gaussian_scores");
  // Precision is symmetric: (P (x - mu))^T = (x - mu)^T P.
  return -((points.rowwise() - model.mean().transpose()) * model.precision());
}

ConditionalGaussian gaussian_conditional_at(const GaussianModel& model, std::size_t j,
                                            const Vector& x) {
  check_dim(model, x.size(), "gaussian_conditional");
  if (j >= model.dim()) throw ShapeError("gaussian_conditional: feature index out of range");
  const auto jj = static_cast<Eigen::Index>(j);
  const auto& p = model.precision();
  const double pjj = p(jj, jj);
  const Vector centered = x - model.mean();
  // Row j of P times centered, minus the diagonal term.
  const double off = p.row(jj).dot(centered) - pjj * centered(jj);
  return {model.mean()(jj) - off / pjj, 1.0 / pjj};
}

ConditionalGaussian gaussian_conditional(const GaussianModel& model, std::size_t j,
                                         const Vector& x_rest) {
  if (j >= model.dim()) throw ShapeError("gaussian_conditional: feature index out of range");
  if (static_cast<std::size_t>(x_rest.size()) + 1 != model.dim()) {
    throw ShapeError("gaussian_conditional: x_rest must have length d-1");
  }
  const auto jj = static_cast<Eigen::Index>(j);
  Vector full(x_rest.size() + 1);
  full.head(jj) = x_rest.head(jj);
  full(jj) = 0.0;
  full.tail(x_rest.size() - jj) = x_rest.tail(x_rest.size() - jj);
  return gaussian_conditional_at(model, j, full);
}

Matrix sample_gaussian(const GaussianModel& model, std::size_t n, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(model.dim());
  Matrix z(static_cast<Eigen::Index>(n), d);
  // Row-major fill so the draw order is sample by sample.
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index k = 0; k < d; ++k) z(i, k) = rng.normal();
  }
  Matrix out = z * model.chol().transpose();
  out.rowwise() += model.mean().transpose();
  return out;
}

}  // namespace featshift
