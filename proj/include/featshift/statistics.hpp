#pragma once

#include <cstddef>
#include <string_view>

#include "featshift/density.hpp"
#include "featshift/gaussian.hpp"
#include "featshift/numeric.hpp"
#include "featshift/rng.hpp"

namespace featshift {

enum class Method { MbSm, MbKs, KnnKs, MarginalKs };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

/// Per-feature expected conditional distance estimates, one entry per column.
struct FeatureStats {
  Vector values;
  Method method = Method::MbSm;
  std::size_t eval_points = 0;

  std::size_t dim() const { return static_cast<std::size_t>(values.size()); }
};

/// Evaluation rows: the first `from_x` rows were drawn from X, the rest from Y.
struct EvalSet {
  Matrix points;
  std::size_t from_x = 0;
  std::size_t from_y = 0;

  std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
};

/// m_per_side rows from each of X and Y, without replacement (with
/// replacement when a side has fewer than m_per_side rows).
EvalSet make_eval_set(const Matrix& X, const Matrix& Y, std::size_t m_per_side, Rng& rng);

/// Score-based ECD: gamma_j = mean_x ([psi(x; p)]_j - [psi(x; q)]_j)^2, with a
/// single score evaluation per model per eval row.
FeatureStats ecd_score(const DensityModel& p_model, const DensityModel& q_model, const EvalSet& eval);

/// Plug-in Fisher divergence mean_x ||psi(x; p) - psi(x; q)||^2 over the
/// same rows; equals the sum of ecd_score's entries.
double fisher_divergence(const DensityModel& p_model, const DensityModel& q_model, const EvalSet& eval);

/// Model-based KS ECD. For each eval row, n_samp standard normals are drawn
/// from each generator and sorted once; every feature's conditional sample is
/// the affine image of that row's draws, so each conditional still gets
/// n_samp fresh draws per side per row.
FeatureStats ecd_mb_ks(const GaussianModel& p_model, const GaussianModel& q_model, const EvalSet& eval,
                       std::size_t n_samp, Rng& rng_p, Rng& rng_q);
FeatureStats ecd_mb_ks(const GaussianModel& p_model, const GaussianModel& q_model, const EvalSet& eval,
                       std::size_t n_samp, Rng& rng);

/// Indices of the k rows of `data` nearest to `x` in Euclidean distance over
/// every coordinate except `skip`. Ties are broken by the lower row index.
IndexList nearest_rows(const Matrix& data, const Vector& x, std::size_t skip, std::size_t k);

/// Model-free KNN-KS ECD.
FeatureStats ecd_knn_ks(const Matrix& X, const Matrix& Y, std::size_t k, const EvalSet& eval);

/// Per-feature two-sample KS on the marginals.
FeatureStats marginal_ks(const Matrix& X, const Matrix& Y);

}  // namespace featshift
