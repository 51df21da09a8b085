#include "featshift/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "featshift/error.hpp"

namespace featshift {

std::size_t MarginalMap::bin_of(double x) const {
  const std::size_t nb = slopes.size();
  if (x < edges.front()) return 0;
  const auto it = std::upper_bound(edges.begin(), edges.end(), x);
  const auto idx = static_cast<std::size_t>(it - edges.begin());
  return std::min(idx - 1, nb - 1);
}

double MarginalMap::forward(double x) const {
  const std::size_t b = bin_of(x);
  return knots[b] + slopes[b] * (x - edges[b]);
}

double MarginalMap::inverse(double z) const {
  const std::size_t nb = slopes.size();
  std::size_t b;
  if (z < knots.front()) {
    b = 0;
  } else {
    const auto it = std::upper_bound(knots.begin(), knots.end(), z);
    b = std::min(static_cast<std::size_t>(it - knots.begin()) - 1, nb - 1);
  }
  return edges[b] + (z - knots[b]) / slopes[b];
}

namespace {

// Linear-interpolated quantile of sorted values at probability q.
double sorted_quantile(const std::vector<double>& s, double q) {
  const double pos = q * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return s[lo] + frac * (s[hi] - s[lo]);
}

MarginalMap fit_marginal(const Eigen::Ref<const Vector>& column, std::size_t bins, double clip) {
  const auto n = static_cast<std::size_t>(column.size());
  std::vector<double> sorted(column.data(), column.data() + n);
  std::sort(sorted.begin(), sorted.end());

  MarginalMap map;
  for (std::size_t i = 0; i <= bins; ++i) {
    const double e = sorted_quantile(sorted, static_cast<double>(i) / static_cast<double>(bins));
    if (map.edges.empty() || e > map.edges.back()) map.edges.push_back(e);
  }
  if (map.edges.size() < 2) {
    const double v = map.edges.front();
    map.edges = {v - 0.5, v + 0.5};
  }
  const std::size_t nb = map.edges.size() - 1;

  std::vector<double> counts(nb, 0.0);
  for (double v : sorted) ++counts[map.bin_of(v)];
  const double smoothing = 1.0 / (static_cast<double>(n) * static_cast<double>(bins));
  double total = 0.0;
  map.probabilities.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    map.probabilities[b] = counts[b] / static_cast<double>(n) + smoothing;
    total += map.probabilities[b];
  }
  for (auto& p : map.probabilities) p /= total;

  map.knots.resize(nb + 1);
  double cdf = 0.0;
  for (std::size_t i = 0; i <= nb; ++i) {
    const double c = std::clamp(cdf, clip, 1.0 - clip);
    map.knots[i] = normal_quantile(c);
    if (i > 0 && map.knots[i] <= map.knots[i - 1]) map.knots[i] = map.knots[i - 1] + 1e-9;
    if (i < nb) cdf += map.probabilities[i];
  }
  map.slopes.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    map.slopes[b] = (map.knots[b + 1] - map.knots[b]) / (map.edges[b + 1] - map.edges[b]);
  }
  return map;
}

Matrix pca_rotation(const Matrix& data) {
  const Vector mean = column_means(data);
  const Matrix cov = sample_covariance(data, mean);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  const Matrix& vecs = eig.eigenvectors();  // ascending eigenvalues
  const Eigen::Index d = vecs.cols();
  Matrix rot(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    Vector v = vecs.col(d - 1 - c);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    rot.col(c) = v;
  }
  return rot;
}

void check_point(const FlowModel& model, Eigen::Index n, const char* op) {
  if (static_cast<std::size_t>(n) != model.dim()) {
    throw ShapeError(std::string(op) + ": dimension mismatch");
  }
}

}  // namespace

FlowModel fit_flow(const Matrix& data, const FlowOptions& options) {
  if (options.layers < 1) throw InvalidArgumentError("fit_flow: layers must be >= 1");
  if (options.bins < 1) throw InvalidArgumentError("fit_flow: bins must be >= 1");
  if (static_cast<std::size_t>(data.rows()) < std::max<std::size_t>(options.bins, 2)) {
    throw InsufficientDataError("fit_flow: need at least `bins` rows");
  }
  if (!data.allFinite()) throw InvalidDataError("fit_flow: non-finite input");

  FlowModel model;
  Matrix current = data;
  for (std::size_t l = 0; l < options.layers; ++l) {
    FlowLayer layer;
    Matrix u(current.rows(), current.cols());
    for (Eigen::Index k = 0; k < current.cols(); ++k) {
      layer.marginals.push_back(fit_marginal(current.col(k), options.bins, options.cdf_clip));
      const auto& m = layer.marginals.back();
      for (Eigen::Index i = 0; i < current.rows(); ++i) u(i, k) = m.forward(current(i, k));
    }
    layer.rotation = pca_rotation(u);
    current = u * layer.rotation;
    model.layers.push_back(std::move(layer));
  }
  return model;
}

FlowModel fit_flow(const Matrix& data, std::size_t layers, std::size_t bins) {
  return fit_flow(data, FlowOptions{layers, bins, 1e-5});
}

Vector flow_forward(const FlowModel& model, const Vector& x) {
  check_point(model, x.size(), "flow_forward");
  Vector cur = x;
  for (const auto& layer : model.layers) {
    for (Eigen::Index k = 0; k < cur.size(); ++k) cur(k) = layer.marginals[static_cast<std::size_t>(k)].forward(cur(k));
    cur = layer.rotation.transpose() * cur;
  }
  return cur;
}

Matrix flow_forward(const FlowModel& model, const Matrix& points) {
  check_point(model, points.cols(), "flow_forward");
  Matrix cur = points;
  for (const auto& layer : model.layers) {
    for (Eigen::Index k = 0; k < cur.cols(); ++k) {
      const auto& m = layer.marginals[static_cast<std::size_t>(k)];
      for (Eigen::Index i = 0; i < cur.rows(); ++i) cur(i, k) = m.forward(cur(i, k));
    }
    cur = (cur * layer.rotation).eval();
  }
  return cur;
}

Vector flow_inverse(const FlowModel& model, const Vector& z) {
  check_point(model, z.size(), "flow_inverse");
  Vector cur = z;
  for (auto it = model.layers.rbegin(); it != model.layers.rend(); ++it) {
    cur = it->rotation * cur;
    for (Eigen::Index k = 0; k < cur.size(); ++k) cur(k) = it->marginals[static_cast<std::size_t>(k)].inverse(cur(k));
  }
  return cur;
}

double flow_log_density(const FlowModel& model, const Vector& x) {
  check_point(model, x.size(), "flow_log_density");
  Vector cur = x;
  double log_det = 0.0;
  for (const auto& layer : model.layers) {
    for (Eigen::Index k = 0; k < cur.size(); ++k) {
      const auto& m = layer.marginals[static_cast<std::size_t>(k)];
      log_det += std::log(m.slope(cur(k)));
      cur(k) = m.forward(cur(k));
    }
    cur = layer.rotation.transpose() * cur;
  }
  double log_base = 0.0;
  for (Eigen::Index k = 0; k < cur.size(); ++k) log_base += normal_log_pdf(cur(k));
  return log_base + log_det;
}

Vector flow_score(const FlowModel& model, const Vector& x) {
  check_point(model, x.size(), "flow_score");
  const std::size_t nl = model.layers.size();
  std::vector<Vector> slopes(nl);
  Vector cur = x;
  for (std::size_t l = 0; l < nl; ++l) {
    const auto& layer = model.layers[l];
    slopes[l].resize(cur.size());
    for (Eigen::Index k = 0; k < cur.size(); ++k) {
      const auto& m = layer.marginals[static_cast<std::size_t>(k)];
      slopes[l](k) = m.slope(cur(k));
      cur(k) = m.forward(cur(k));
    }
    cur = layer.rotation.transpose() * cur;
  }
  Vector grad = -cur;
  for (std::size_t l = nl; l-- > 0;) {
    grad = model.layers[l].rotation * grad;
    grad.array() *= slopes[l].array();
  }
  return grad;
}

Matrix flow_scores(const FlowModel& model, const Matrix& points) {
  check_point(model, points.cols(), "flow_scores");
  const std::size_t nl = model.layers.size();
  std::vector<Matrix> slopes(nl);
  Matrix cur = points;
  for (std::size_t l = 0; l < nl; ++l) {
    const auto& layer = model.layers[l];
    slopes[l].resize(cur.rows(), cur.cols());
    for (Eigen::Index k = 0; k < cur.cols(); ++k) {
      const auto& m = layer.marginals[static_cast<std::size_t>(k)];
      for (Eigen::Index i = 0; i < cur.rows(); ++i) {
        slopes[l](i, k) = m.slope(cur(i, k));
        cur(i, k) = m.forward(cur(i, k));
      }
    }
    cur = (cur * layer.rotation).eval();
  }
  // Row form of grad = R grad: grad_row = grad_row R^T.
  Matrix grad = -cur;
  for (std::size_t l = nl; l-- > 0;) {
    grad = (grad * model.layers[l].rotation.transpose()).eval();
    grad.array() *= slopes[l].array();
  }
  return grad;
}

double flow_edge_distance(const FlowModel& model, const Vector& x) {
  check_point(model, x.size(), "flow_edge_distance");
  double best = std::numeric_limits<double>::infinity();
  Vector cur = x;
  for (const auto& layer : model.layers) {
    for (Eigen::Index k = 0; k < cur.size(); ++k) {
      const auto& m = layer.marginals[static_cast<std::size_t>(k)];
      const auto it = std::lower_bound(m.edges.begin(), m.edges.end(), cur(k));
      if (it != m.edges.end()) best = std::min(best, *it - cur(k));
      if (it != m.edges.begin()) best = std::min(best, cur(k) - *(it - 1));
      cur(k) = m.forward(cur(k));
    }
    cur = layer.rotation.transpose() * cur;
  }
  return best;
}

}  // namespace featshift
