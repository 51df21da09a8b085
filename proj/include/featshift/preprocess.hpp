#pragma once

#include <cstddef>
#include <vector>

#include "featshift/numeric.hpp"

namespace featshift {

/// Row t of the result is series[t + 1] - series[t].
Matrix difference_series(const Matrix& series);

double yeo_johnson(double x, double lambda);

/// Maximizer of the Yeo-Johnson profile Gaussian log-likelihood over
/// lambda in [-5, 5] (golden-section search, tolerance 1e-4).
double yeo_johnson_fit(const Vector& values);

/// Profile log-likelihood maximized by yeo_johnson_fit.
double yeo_johnson_log_likelihood(const Vector& values, double lambda);

struct PreprocessFlags {
  bool difference = false;
  bool power_transform = false;
  bool standardize = false;
};

/// Per-column Yeo-Johnson lambdas and standardization moments, fitted once
/// on reference data and then applied unchanged to any other block.
/// Differencing is not part of the fitted state; callers difference first.
class Preprocessor {
public:
  Preprocessor() = default;

  static Preprocessor fit(const Matrix& reference, const PreprocessFlags& flags);

  Matrix apply(const Matrix& data) const;

  const PreprocessFlags& flags() const noexcept { return flags_; }
  const std::vector<double>& lambdas() const noexcept { return lambdas_; }
  const Vector& means() const noexcept { return means_; }
  const Vector& scales() const noexcept { return scales_; }

private:
  PreprocessFlags flags_{};
  std::vector<double> lambdas_;
  Vector means_;
  Vector scales_;
};

}  // namespace featshift
