#include "featshift/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "featshift/error.hpp"
#include "featshift/parallel.hpp"

namespace featshift {

namespace {

template <class MakePair>
NullDistribution run_replicates(std::size_t B, std::size_t d, const EstimatorConfig& cfg, std::uint64_t base,
                                MakePair make_pair) {
  NullDistribution null;
  null.method = cfg.method;
  null.stats.resize(static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(d));
  parallel_for(B, [&](std::size_t b) {
    Rng rng(derive_seed(base, "bootstrap", b));
    try {
      const auto [xb, yb] = make_pair(rng);
      const FeatureStats s = compute_stats(xb, yb, cfg, rng);
      null.stats.row(static_cast<Eigen::Index>(b)) = s.values.transpose();
    } catch (const Error& e) {
      throw Error(e.kind(), "bootstrap replicate " + std::to_string(b) + ": " + e.what());
    }
  });
  return null;
}

}  // namespace

NullDistribution bootstrap_null_pooled(const Matrix& X, const Matrix& Y, std::size_t B, const EstimatorConfig& cfg,
                                       Rng& rng, PooledScheme scheme) {
  if (B < 1) throw InvalidArgumentError("bootstrap_null_pooled: B must be >= 1");
  if (X.cols() != Y.cols()) throw ShapeError("bootstrap_null_pooled: X and Y column counts differ");
  const Matrix pool = vstack(X, Y);
  const auto nx = static_cast<std::size_t>(X.rows());
  const auto ny = static_cast<std::size_t>(Y.rows());
  const auto total = nx + ny;
  return run_replicates(B, static_cast<std::size_t>(X.cols()), cfg, rng.next_u64(), [&](Rng& r) {
    IndexList rx(nx);
    IndexList ry(ny);
    if (scheme == PooledScheme::WithReplacement) {
      for (auto& i : rx) i = r.index(total);
      for (auto& i : ry) i = r.index(total);
    } else {
      const IndexList perm = r.permutation(total);
      std::copy_n(perm.begin(), nx, rx.begin());
      std::copy(perm.begin() + static_cast<std::ptrdiff_t>(nx), perm.end(), ry.begin());
    }
    return std::pair{gather_rows(pool, rx), gather_rows(pool, ry)};
  });
}

NullDistribution bootstrap_null_time(const Matrix& clean, std::size_t n, std::size_t B, const EstimatorConfig& cfg,
                                     Rng& rng) {
  if (B < 1) throw InvalidArgumentError("bootstrap_null_time: B must be >= 1");
  if (n < 1) throw InvalidArgumentError("bootstrap_null_time: n must be >= 1");
  const auto T = static_cast<std::size_t>(clean.rows());
  if (T < 2 * n) throw InsufficientDataError("bootstrap_null_time: need at least 2n clean rows");
  return run_replicates(B, static_cast<std::size_t>(clean.cols()), cfg, rng.next_u64(), [&](Rng& r) {
    const std::size_t t = r.integer(n, T - n);
    return std::pair{slice_rows(clean, t - n, t), slice_rows(clean, t, t + n)};
  });
}

std::size_t order_statistic_index(std::size_t B, double level) {
  const double raw = std::ceil((1.0 - level) * static_cast<double>(B) - 1e-9);
  if (raw < 1.0) return 1;
  return std::min(B, static_cast<std::size_t>(raw));
}

Thresholds thresholds_from_null(const NullDistribution& null, double alpha, bool bonferroni) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgumentError("thresholds_from_null: alpha must lie in (0, 1)");
  const std::size_t B = null.replicates();
  const std::size_t d = null.dim();
  if (B < 1) throw InvalidArgumentError("thresholds_from_null: empty null distribution");

  Thresholds thr;
  thr.alpha = alpha;
  thr.corrected = bonferroni;
  thr.level = bonferroni ? alpha / static_cast<double>(d) : alpha;
  thr.order_index = order_statistic_index(B, thr.level);
  thr.per_feature.resize(static_cast<Eigen::Index>(d));
  std::vector<double> column(B);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t b = 0; b < B; ++b) {
      column[b] = null.stats(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(j));
    }
    const auto kth = column.begin() + static_cast<std::ptrdiff_t>(thr.order_index - 1);
    std::nth_element(column.begin(), kth, column.end());
    thr.per_feature(static_cast<Eigen::Index>(j)) = *kth;
  }
  return thr;
}

}  // namespace featshift
