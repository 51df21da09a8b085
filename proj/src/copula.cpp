#include "featshift/copula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "featshift/error.hpp"

namespace featshift {

namespace {

// Index of the first leading minor whose Cholesky pivot is not positive,
// or d when every pivot passes.
int failing_minor(const Matrix& m, double floor) {
  const Eigen::Index d = m.rows();
  Matrix l = Matrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    double pivot = m(k, k) - l.row(k).head(k).squaredNorm();
    if (!(pivot > floor)) return static_cast<int>(k);
    l(k, k) = std::sqrt(pivot);
    for (Eigen::Index i = k + 1; i < d; ++i) {
      l(i, k) = (m(i, k) - l.row(i).head(k).dot(l.row(k).head(k))) / l(k, k);
    }
  }
  return static_cast<int>(d);
}

}  // namespace

Matrix precision_from_graph(const GraphSpec& g, double weight) {
  const auto d = static_cast<Eigen::Index>(g.d);
  Matrix omega = Matrix::Identity(d, d) + weight * adjacency(g);
  const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(omega, Eigen::EigenvaluesOnly).eigenvalues()(0);
  if (min_eig <= 1e-10) {
    int minor = failing_minor(omega, 1e-10);
    if (minor == static_cast<int>(d)) minor = static_cast<int>(d) - 1;
    std::ostringstream os;
    os << "edge weight " << weight << " makes the precision matrix non positive definite (min eigenvalue "
       << min_eig << ", leading minor " << minor << ")";
    throw WeightTooLargeError(os.str(), minor);
  }
  return omega;
}

Matrix correlation_from_precision(const Matrix& precision) {
  const Eigen::LLT<Matrix> llt(precision);
  if (llt.info() != Eigen::Success) throw InvalidDataError("correlation_from_precision: not positive definite");
  Matrix cov = llt.solve(Matrix::Identity(precision.rows(), precision.cols()));
  const Vector inv_sd = cov.diagonal().array().rsqrt();
  Matrix corr = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
  corr = 0.5 * (corr + corr.transpose());
  corr.diagonal().setOnes();
  return corr;
}

double pd_weight_limit(const GraphSpec& g) {
  if (g.edges.empty()) return std::numeric_limits<double>::infinity();
  const double lambda_min =
      Eigen::SelfAdjointEigenSolver<Matrix>(adjacency(g), Eigen::EigenvaluesOnly).eigenvalues()(0);
  return -1.0 / lambda_min;
}

double gaussian_mi(const Matrix& corr, std::span<const std::size_t> block) {
  const auto d = static_cast<std::size_t>(corr.rows());
  IndexList a(block.begin(), block.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  if (a.empty() || a.size() >= d) throw InvalidArgumentError("gaussian_mi: block must be a nonempty proper subset");
  if (a.back() >= d) throw InvalidArgumentError("gaussian_mi: block index out of range");
  const IndexList rest = complement(a, d);
  const auto ld_all = spd_log_det(corr);
  const auto ld_a = spd_log_det(principal_submatrix(corr, a));
  const auto ld_b = spd_log_det(principal_submatrix(corr, rest));
  if (!ld_all || !ld_a || !ld_b) throw InvalidDataError("gaussian_mi: correlation matrix is not positive definite");
  return std::max(0.0, 0.5 * (*ld_a + *ld_b - *ld_all));
}

double center_mi(const GraphSpec& g, std::size_t center, double weight) {
  const std::size_t block[] = {center};
  return gaussian_mi(correlation_from_precision(precision_from_graph(g, weight)), block);
}

double calibrate_edge_weight(const GraphSpec& g, std::size_t center, double target_mi, double tol) {
  if (!(target_mi > 0.0)) throw InvalidArgumentError("calibrate_edge_weight: target MI must be positive");
  if (center >= g.d) throw InvalidArgumentError("calibrate_edge_weight: center out of range");
  if (degree(g, center) == 0) {
    throw UnreachableTargetError("calibrate_edge_weight: center node has no edges; attainable MI is 0", 0.0);
  }
  double lo = 0.0;
  double hi = 0.999 * pd_weight_limit(g);
  const double f_hi = center_mi(g, center, hi);
  if (f_hi < target_mi - tol) {
    std::ostringstream os;
    os << "calibrate_edge_weight: target MI " << target_mi << " unreachable; maximum attainable is " << f_hi;
    throw UnreachableTargetError(os.str(), f_hi);
  }
  if (std::abs(f_hi - target_mi) <= tol) return hi;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f = center_mi(g, center, mid);
    if (std::abs(f - target_mi) <= tol) return mid;
    (f < target_mi ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double arcsine_quantile(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw InvalidArgumentError("arcsine_quantile: u must lie in [0, 1]");
  const double s = std::sin(0.5 * kPi * u);
  return s * s;
}

double arcsine_cdf(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgumentError("arcsine_cdf: x must lie in [0, 1]");
  return 2.0 / kPi * std::asin(std::sqrt(x));
}

CopulaSpec make_copula(Matrix correlation, double edge_weight) {
  const Eigen::LLT<Matrix> llt(correlation);
  if (llt.info() != Eigen::Success) throw InvalidDataError("make_copula: correlation is not positive definite");
  CopulaSpec spec;
  spec.chol = llt.matrixL();
  spec.correlation = std::move(correlation);
  spec.edge_weight = edge_weight;
  return spec;
}

Matrix sample_copula(const CopulaSpec& spec, std::size_t n, Rng& rng) {
  const Eigen::Index d = spec.correlation.rows();
  Matrix z(static_cast<Eigen::Index>(n), d);
  std::vector<double> row(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    rng.fill_normal(row.data(), row.size());
    z.row(i) = Eigen::Map<const Eigen::RowVectorXd>(row.data(), d);
  }
  Matrix x = z * spec.chol.transpose();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double u = std::clamp(normal_cdf(x.data()[i]), 0.0, 1.0);
    x.data()[i] = arcsine_quantile(u);
  }
  return x;
}

}  // namespace featshift
