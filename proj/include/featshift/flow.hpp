#pragma once

#include <cstddef>
#include <vector>

#include "featshift/numeric.hpp"

namespace featshift {

/// Monotone piecewise-linear map R -> R. Between consecutive histogram edges
/// it interpolates linearly from edge to Phi^{-1}(clipped CDF at that edge);
/// outside the edges it extends the boundary bins' slopes.
struct MarginalMap {
  std::vector<double> edges;          // strictly increasing, size nb+1
  std::vector<double> probabilities;  // smoothed bin masses, size nb
  std::vector<double> knots;          // Gaussianized edge values, size nb+1
  std::vector<double> slopes;         // size nb, all > 0

  std::size_t bin_of(double x) const;  // right-hand bin at an edge; tails clamp
  double forward(double x) const;
  double inverse(double z) const;
  double slope(double x) const { return slopes[bin_of(x)]; }
};

/// One Gaussianization layer: y = R^T m(x), R orthogonal (PCA eigenvectors).
struct FlowLayer {
  std::vector<MarginalMap> marginals;
  Matrix rotation;
};

struct FlowModel {
  std::vector<FlowLayer> layers;

  std::size_t dim() const {
    return layers.empty() ? 0 : static_cast<std::size_t>(layers.front().rotation.rows());
  }
};

struct FlowOptions {
  std::size_t layers = 2;
  std::size_t bins = 100;
  double cdf_clip = 1e-5;
};

/// Iterative Gaussianization. Each layer fits per-dimension equal-count
/// histograms (Laplace-smoothed with 1/(n*bins) mass per bin) composed with
/// the normal quantile, then rotates by the eigenvectors of the transformed
/// data's covariance (eigenvalues descending, each eigenvector's
/// largest-magnitude entry made positive).
FlowModel fit_flow(const Matrix& data, const FlowOptions& options = {});
FlowModel fit_flow(const Matrix& data, std::size_t layers, std::size_t bins);

Vector flow_forward(const FlowModel& model, const Vector& x);
Vector flow_inverse(const FlowModel& model, const Vector& z);
Matrix flow_forward(const FlowModel& model, const Matrix& points);

double flow_log_density(const FlowModel& model, const Vector& x);

/// J(x)^T (-T(x)): all d components from one forward and one backward pass.
Vector flow_score(const FlowModel& model, const Vector& x);
Matrix flow_scores(const FlowModel& model, const Matrix& points);

/// Smallest distance, over layers and dimensions, between a layer input
/// coordinate and the nearest histogram edge of that layer. The score is
/// smooth within this radius.
double flow_edge_distance(const FlowModel& model, const Vector& x);

}  // namespace featshift
