#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "featshift/bootstrap.hpp"

namespace featshift {

bool detect(const FeatureStats& stats, const Thresholds& thr);

/// Indices of the k largest statistics, largest first; equal values keep the
/// lower index first.
IndexList localize(const FeatureStats& stats, std::size_t k);

struct DetectionReport {
  bool detected = false;
  IndexList localized;
  FeatureStats stats;
  Thresholds thresholds;
  std::optional<std::size_t> window_step;
};

/// Stage 1 against fixed thresholds, then stage 2 only when stage 1 fires.
DetectionReport decide(FeatureStats stats, const Thresholds& thr, std::size_t k);

enum class NullKind { Pooled, Time };

std::string_view to_string(NullKind kind);
NullKind parse_null_kind(std::string_view name);

struct TestConfig {
  EstimatorConfig estimator{};
  std::size_t B = 50;
  double alpha = 0.05;
  std::size_t k = 1;
  bool bonferroni = true;
  NullKind null_kind = NullKind::Pooled;
  PooledScheme pooled_scheme = PooledScheme::WithReplacement;
};

/// Builds the null (pooled from X ++ Y, or time chunks of `clean` with
/// half-size |X|), derives thresholds, computes the statistic on (X, Y) and
/// applies decide(). `clean` is required for the time null.
DetectionReport two_stage_test(const Matrix& X, const Matrix& Y, const TestConfig& cfg, Rng& rng,
                               const Matrix* clean = nullptr);

}  // namespace featshift
