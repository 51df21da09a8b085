#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "featshift/gaussian.hpp"
#include "featshift/numeric.hpp"
#include "featshift/rng.hpp"

namespace featshift::testing {

// d x d matrix with unit diagonal and every off-diagonal entry equal to rho.
inline Matrix equicorrelation(std::size_t d, double rho) {
  Matrix m = Matrix::Constant(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d), rho);
  m.diagonal().setOnes();
  return m;
}

inline Matrix gaussian_rows(const Matrix& cov, std::size_t n, Rng& rng) {
  const GaussianModel model = GaussianModel::from_moments(Vector::Zero(cov.rows()), cov);
  return sample_gaussian(model, n, rng);
}

inline Vector std_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> column(const Matrix& m, Eigen::Index j) {
  std::vector<double> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = m(i, j);
  return out;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace featshift::testing
