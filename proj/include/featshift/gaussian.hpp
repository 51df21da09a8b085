#pragma once

#include <cstddef>

#include "featshift/numeric.hpp"
#include "featshift/rng.hpp"

namespace featshift {

/// Multivariate normal with cached Cholesky factor and precision.
/// Immutable once built; construct through fit_gaussian or from_moments.
class GaussianModel {
public:
  /// Validates symmetry and positive definiteness, then caches chol and
  /// precision. Throws InvalidDataError when the covariance is not SPD.
  static GaussianModel from_moments(Vector mean, Matrix covariance);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(mean_.size()); }
  const Vector& mean() const noexcept { return mean_; }
  const Matrix& covariance() const noexcept { return covariance_; }
  const Matrix& precision() const noexcept { return precision_; }
  /// Lower-triangular L with covariance = L L^T.
  const Matrix& chol() const noexcept { return chol_; }
  double log_det_covariance() const noexcept { return log_det_; }
  /// Ridge actually added to the diagonal when fitted (0 for from_moments).
  double ridge() const noexcept { return ridge_; }

private:
  GaussianModel() = default;
  friend GaussianModel fit_gaussian(const Matrix& data, double ridge);

  Vector mean_;
  Matrix covariance_;
  Matrix precision_;
  Matrix chol_;
  double log_det_ = 0.0;
  double ridge_ = 0.0;
};

/// Full conditional p(x_j | x_-j) of a Gaussian.
struct ConditionalGaussian {
  double mean;
  double variance;
};

/// Column means and (n-1) sample covariance plus ridge*I. When that is not
/// positive definite the ridge is raised by decades starting at 1e-6 until
/// the Cholesky factorization succeeds.
GaussianModel fit_gaussian(const Matrix& data, double ridge = 0.0);

double gaussian_log_density(const GaussianModel& model, const Vector& x);

/// grad_x log N(x; mu, Sigma) = -Sigma^{-1}(x - mu), one matrix-vector product.
Vector gaussian_score(const GaussianModel& model, const Vector& x);

/// Scores of every row of `points` (m x d) at once.
Matrix gaussian_scores(const GaussianModel& model, const Matrix& points);

/// Conditional of feature j given the remaining coordinates `x_rest`
/// (length d-1, original order with j removed).
ConditionalGaussian gaussian_conditional(const GaussianModel& model, std::size_t j,
                                         const Vector& x_rest);

/// Same conditional, taking the full point and ignoring its j-th entry.
/// Uses the precision row: var = 1/P_jj, mean = mu_j - sum_{k!=j} P_jk (x_k - mu_k) / P_jj.
ConditionalGaussian gaussian_conditional_at(const GaussianModel& model, std::size_t j,
                                            const Vector& x);

/// n draws mu + L z, z ~ N(0, I).
Matrix sample_gaussian(const GaussianModel& model, std::size_t n, Rng& rng);

}  // namespace featshift
