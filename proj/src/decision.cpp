#include "featshift/decision.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "featshift/error.hpp"

namespace featshift {

bool detect(const FeatureStats& stats, const Thresholds& thr) {
  if (stats.values.size() != thr.per_feature.size()) throw ShapeError("detect: dimension mismatch");
  return (stats.values.array() > thr.per_feature.array()).any();
}

IndexList localize(const FeatureStats& stats, std::size_t k) {
  const std::size_t d = stats.dim();
  if (k < 1 || k > d) throw InvalidArgumentError("localize: budget must lie in [1, d]");
  IndexList order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& v = stats.values;
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double va = v(static_cast<Eigen::Index>(a));
                      const double vb = v(static_cast<Eigen::Index>(b));
                      return va > vb || (va == vb && a < b);
                    });
  order.resize(k);
  return order;
}

DetectionReport decide(FeatureStats stats, const Thresholds& thr, std::size_t k) {
  DetectionReport report;
  report.detected = detect(stats, thr);
  if (report.detected) report.localized = localize(stats, k);
  report.stats = std::move(stats);
  report.thresholds = thr;
  return report;
}

std::string_view to_string(NullKind kind) { return kind == NullKind::Pooled ? "pooled" : "time"; }

NullKind parse_null_kind(std::string_view name) {
  if (name == "pooled") return NullKind::Pooled;
  if (name == "time") return NullKind::Time;
  throw ConfigError("unknown bootstrap kind '" + std::string(name) + "'");
}

DetectionReport two_stage_test(const Matrix& X, const Matrix& Y, const TestConfig& cfg, Rng& rng,
                               const Matrix* clean) {
  if (X.cols() != Y.cols()) throw ShapeError("two_stage_test: X and Y column counts differ");
  const std::uint64_t base = rng.next_u64();
  Rng null_rng(derive_seed(base, "null"));
  Rng stat_rng(derive_seed(base, "stats"));

  NullDistribution null;
  if (cfg.null_kind == NullKind::Pooled) {
    null = bootstrap_null_pooled(X, Y, cfg.B, cfg.estimator, null_rng, cfg.pooled_scheme);
  } else {
    if (clean == nullptr) throw ConfigError("two_stage_test: the time null needs a clean series");
    null = bootstrap_null_time(*clean, static_cast<std::size_t>(X.rows()), cfg.B, cfg.estimator, null_rng);
  }
  const Thresholds thr = thresholds_from_null(null, cfg.alpha, cfg.bonferroni);
  return decide(compute_stats(X, Y, cfg.estimator, stat_rng), thr, cfg.k);
}

}  // namespace featshift
