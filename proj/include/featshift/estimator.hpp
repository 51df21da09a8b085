#pragma once

#include <cstddef>

#include "featshift/density.hpp"
#include "featshift/statistics.hpp"

namespace featshift {

/// Everything needed to turn an (X, Y) pair into a FeatureStats.
struct EstimatorConfig {
  Method method = Method::MbSm;
  DensityOptions density{};   // MB-SM model family; MB-KS always uses a Gaussian
  std::size_t knn_k = 0;      // 0 selects ceil(sqrt(n))
  std::size_t n_samp = 1000;
  std::size_t m_per_side = 30;
};

std::size_t resolved_knn_k(const EstimatorConfig& cfg, std::size_t n);

/// Fits p on X and q on Y (model-based methods), draws the eval set and
/// evaluates the configured statistic.
FeatureStats compute_stats(const Matrix& X, const Matrix& Y, const EstimatorConfig& cfg, Rng& rng);

}  // namespace featshift
