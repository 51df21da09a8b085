#include "featshift/statistics.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "featshift/error.hpp"
#include "featshift/ks.hpp"

namespace featshift {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::MbSm: return "mb-sm";
    case Method::MbKs: return "mb-ks";
    case Method::KnnKs: return "knn-ks";
    case Method::MarginalKs: return "marginal-ks";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "mb-sm") return Method::MbSm;
  if (name == "mb-ks") return Method::MbKs;
  if (name == "knn-ks") return Method::KnnKs;
  if (name == "marginal-ks") return Method::MarginalKs;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

namespace {

IndexList draw_rows(std::size_t n, std::size_t m, Rng& rng) {
  IndexList rows;
  rows.reserve(m);
  if (n >= m) {
    // Partial Fisher-Yates: the first m entries of a uniform permutation.
    IndexList pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < m; ++i) {
      std::swap(pool[i], pool[i + rng.index(n - i)]);
      rows.push_back(pool[i]);
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) rows.push_back(rng.index(n));
  }
  return rows;
}

}  // namespace

EvalSet make_eval_set(const Matrix& X, const Matrix& Y, std::size_t m_per_side, Rng& rng) {
  if (m_per_side < 1) throw InvalidArgumentError("make_eval_set: m_per_side must be >= 1");
  if (X.cols() != Y.cols()) throw ShapeError("make_eval_set: X and Y column counts differ");
  if (X.rows() < 1 || Y.rows() < 1) throw InsufficientDataError("make_eval_set: empty input");
  const IndexList rx = draw_rows(static_cast<std::size_t>(X.rows()), m_per_side, rng);
  const IndexList ry = draw_rows(static_cast<std::size_t>(Y.rows()), m_per_side, rng);
  EvalSet eval;
  eval.points = vstack(gather_rows(X, rx), gather_rows(Y, ry));
  eval.from_x = m_per_side;
  eval.from_y = m_per_side;
  return eval;
}

FeatureStats ecd_score(const DensityModel& p_model, const DensityModel& q_model, const EvalSet& eval) {
  const std::size_t d = density_dim(p_model);
  if (density_dim(q_model) != d || static_cast<std::size_t>(eval.points.cols()) != d) {
    throw ShapeError("ecd_score: model dimensions differ");
  }
  if (eval.size() == 0) throw InsufficientDataError("ecd_score: empty eval set");
  const Matrix diff = density_scores(p_model, eval.points) - density_scores(q_model, eval.points);
  FeatureStats out;
  out.values = diff.array().square().colwise().mean().transpose();
  out.method = Method::MbSm;
  out.eval_points = eval.size();
  return out;
}

double fisher_divergence(const DensityModel& p_model, const DensityModel& q_model, const EvalSet& eval) {
  const Matrix diff = density_scores(p_model, eval.points) - density_scores(q_model, eval.points);
  return diff.rowwise().squaredNorm().mean();
}

FeatureStats ecd_mb_ks(const GaussianModel& p_model, const GaussianModel& q_model, const EvalSet& eval,
                       std::size_t n_samp, Rng& rng_p, Rng& rng_q) {
  const std::size_t d = p_model.dim();
  if (q_model.dim() != d || static_cast<std::size_t>(eval.points.cols()) != d) {
    throw ShapeError("ecd_mb_ks: model dimensions differ");
  }
  if (n_samp < 1) throw InvalidArgumentError("ecd_mb_ks: n_samp must be >= 1");
  if (eval.size() == 0) throw InsufficientDataError("ecd_mb_ks: empty eval set");

  std::vector<double> zp(n_samp);
  std::vector<double> zq(n_samp);
  Vector sums = Vector::Zero(static_cast<Eigen::Index>(d));
  for (Eigen::Index r = 0; r < eval.points.rows(); ++r) {
    const Vector x = eval.points.row(r).transpose();
    rng_p.fill_normal(zp.data(), n_samp);
    rng_q.fill_normal(zq.data(), n_samp);
    std::sort(zp.begin(), zp.end());
    std::sort(zq.begin(), zq.end());
    for (std::size_t j = 0; j < d; ++j) {
      const auto cp = gaussian_conditional_at(p_model, j, x);
      const auto cq = gaussian_conditional_at(q_model, j, x);
      sums(static_cast<Eigen::Index>(j)) +=
          ks_affine_sorted(zp, cp.mean, std::sqrt(cp.variance), zq, cq.mean, std::sqrt(cq.variance));
    }
  }
  FeatureStats out;
  out.values = sums / static_cast<double>(eval.size());
  out.method = Method::MbKs;
  out.eval_points = eval.size();
  return out;
}

FeatureStats ecd_mb_ks(const GaussianModel& p_model, const GaussianModel& q_model, const EvalSet& eval,
                       std::size_t n_samp, Rng& rng) {
  Rng rng_p = rng.split("mb-ks/p", rng.next_u64());
  Rng rng_q = rng.split("mb-ks/q", rng.next_u64());
  return ecd_mb_ks(p_model, q_model, eval, n_samp, rng_p, rng_q);
}

namespace {

// Squared distances from x to every row of data, skipping coordinate `skip`.
void partial_distances(const Matrix& data, const Vector& x, std::size_t skip, Vector& out) {
  out.setZero(data.rows());
  for (Eigen::Index k = 0; k < data.cols(); ++k) {
    if (static_cast<std::size_t>(k) == skip) continue;
    out.array() += (data.col(k).array() - x(k)).square();
  }
}

void select_nearest(const Vector& dist, std::size_t k, IndexList& idx) {
  idx.resize(static_cast<std::size_t>(dist.size()));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto closer = [&](std::size_t a, std::size_t b) {
    const double da = dist(static_cast<Eigen::Index>(a));
    const double db = dist(static_cast<Eigen::Index>(b));
    return da < db || (da == db && a < b);
  };
  if (k < idx.size()) {
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), closer);
    idx.resize(k);
  }
}

}  // namespace

IndexList nearest_rows(const Matrix& data, const Vector& x, std::size_t skip, std::size_t k) {
  if (x.size() != data.cols()) throw ShapeError("nearest_rows: dimension mismatch");
  if (k > static_cast<std::size_t>(data.rows())) throw InvalidArgumentError("nearest_rows: k exceeds n");
  Vector dist;
  partial_distances(data, x, skip, dist);
  IndexList idx;
  select_nearest(dist, k, idx);
  std::sort(idx.begin(), idx.end());
  return idx;
}

FeatureStats ecd_knn_ks(const Matrix& X, const Matrix& Y, std::size_t k, const EvalSet& eval) {
  if (X.cols() != Y.cols() || eval.points.cols() != X.cols()) {
    throw ShapeError("ecd_knn_ks: dimension mismatch");
  }
  if (k < 1) throw InvalidArgumentError("ecd_knn_ks: k must be >= 1");
  if (k > static_cast<std::size_t>(X.rows()) || k > static_cast<std::size_t>(Y.rows())) {
    throw InvalidArgumentError("ecd_knn_ks: k exceeds the sample size");
  }
  if (eval.size() == 0) throw InsufficientDataError("ecd_knn_ks: empty eval set");

  const auto d = static_cast<std::size_t>(X.cols());
  Vector sums = Vector::Zero(X.cols());
  Vector dist;
  IndexList idx;
  std::vector<double> a(k);
  std::vector<double> b(k);
  for (Eigen::Index r = 0; r < eval.points.rows(); ++r) {
    const Vector x = eval.points.row(r).transpose();
    for (std::size_t j = 0; j < d; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      partial_distances(X, x, j, dist);
      select_nearest(dist, k, idx);
      for (std::size_t i = 0; i < k; ++i) a[i] = X(static_cast<Eigen::Index>(idx[i]), jj);
      partial_distances(Y, x, j, dist);
      select_nearest(dist, k, idx);
      for (std::size_t i = 0; i < k; ++i) b[i] = Y(static_cast<Eigen::Index>(idx[i]), jj);
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      sums(jj) += ks_sorted(a, b);
    }
  }
  FeatureStats out;
  out.values = sums / static_cast<double>(eval.size());
  out.method = Method::KnnKs;
  out.eval_points = eval.size();
  return out;
}

FeatureStats marginal_ks(const Matrix& X, const Matrix& Y) {
  if (X.cols() != Y.cols()) throw ShapeError("marginal_ks: column counts differ");
  FeatureStats out;
  out.values.resize(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const Vector a = X.col(j);
    const Vector b = Y.col(j);
    out.values(j) = ks_statistic({a.data(), static_cast<std::size_t>(a.size())},
                                 {b.data(), static_cast<std::size_t>(b.size())});
  }
  out.method = Method::MarginalKs;
  out.eval_points = 0;
  return out;
}

}  // namespace featshift
