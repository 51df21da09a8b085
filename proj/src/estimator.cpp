#include "featshift/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "featshift/error.hpp"

namespace featshift {

std::size_t resolved_knn_k(const EstimatorConfig& cfg, std::size_t n) {
  if (cfg.knn_k > 0) return cfg.knn_k;
  auto k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(n, 1));
}

FeatureStats compute_stats(const Matrix& X, const Matrix& Y, const EstimatorConfig& cfg, Rng& rng) {
  if (X.cols() != Y.cols()) throw ShapeError("compute_stats: X and Y column counts differ");
  if (cfg.method == Method::MarginalKs) return marginal_ks(X, Y);

  const EvalSet eval = make_eval_set(X, Y, cfg.m_per_side, rng);
  switch (cfg.method) {
    case Method::MbSm: {
      const DensityModel p = fit_density(X, cfg.density);
      const DensityModel q = fit_density(Y, cfg.density);
      return ecd_score(p, q, eval);
    }
    case Method::MbKs: {
      const GaussianModel p = fit_gaussian(X, cfg.density.ridge);
      const GaussianModel q = fit_gaussian(Y, cfg.density.ridge);
      return ecd_mb_ks(p, q, eval, cfg.n_samp, rng);
    }
    case Method::KnnKs: {
      const std::size_t n = static_cast<std::size_t>(std::min(X.rows(), Y.rows()));
      return ecd_knn_ks(X, Y, resolved_knn_k(cfg, n), eval);
    }
    case Method::MarginalKs: break;
  }
  return marginal_ks(X, Y);
}

}  // namespace featshift
