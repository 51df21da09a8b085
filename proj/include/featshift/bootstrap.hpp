#pragma once

#include <cstddef>

#include "featshift/estimator.hpp"

namespace featshift {

/// B bootstrap replicates of the statistic vector, one per row.
struct NullDistribution {
  Matrix stats;
  Method method = Method::MbSm;

  std::size_t replicates() const { return static_cast<std::size_t>(stats.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(stats.cols()); }
};

enum class PooledScheme {
  WithReplacement,   // X*, Y* each drawn with replacement from X ++ Y
  PermutationSplit,  // X ++ Y shuffled, then split at |X|
};

/// Classical two-sample bootstrap from the concatenation of X and Y.
/// Replicate b uses its own generator derived from (rng draw, b), so the
/// result does not depend on the worker count.
NullDistribution bootstrap_null_pooled(const Matrix& X, const Matrix& Y, std::size_t B, const EstimatorConfig& cfg,
                                       Rng& rng, PooledScheme scheme = PooledScheme::WithReplacement);

/// Contiguous-chunk null: for each replicate, t ~ U{n, ..., T-n} and
/// (X*, Y*) = (clean[t-n, t), clean[t, t+n)).
NullDistribution bootstrap_null_time(const Matrix& clean, std::size_t n, std::size_t B, const EstimatorConfig& cfg,
                                     Rng& rng);

struct Thresholds {
  Vector per_feature;
  double alpha = 0.05;
  bool corrected = false;
  double level = 0.05;          // alpha / d when corrected
  std::size_t order_index = 0;  // 1-based order statistic used

  std::size_t dim() const { return static_cast<std::size_t>(per_feature.size()); }
};

/// 1-based index ceil((1 - level) * B), clamped to [1, B].
std::size_t order_statistic_index(std::size_t B, double level);

Thresholds thresholds_from_null(const NullDistribution& null, double alpha, bool bonferroni);

}  // namespace featshift
