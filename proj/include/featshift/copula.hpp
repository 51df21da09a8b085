#pragma once

#include <cstddef>
#include <span>

#include "featshift/graph.hpp"

namespace featshift {

/// I + weight * adjacency(g). Throws WeightTooLargeError when the smallest
/// eigenvalue is <= 1e-10.
Matrix precision_from_graph(const GraphSpec& g, double weight);

/// Inverse of a precision matrix rescaled to unit diagonal.
Matrix correlation_from_precision(const Matrix& precision);

/// Largest positive weight for which I + weight * A stays positive definite
/// (-1 / lambda_min(A)); +infinity for an empty graph.
double pd_weight_limit(const GraphSpec& g);

/// Mutual information between the Gaussian blocks A and its complement:
/// (log det S_AA + log det S_BB - log det S) / 2.
double gaussian_mi(const Matrix& corr, std::span<const std::size_t> block);

/// MI between `center` and all other nodes as a function of the edge weight.
double center_mi(const GraphSpec& g, std::size_t center, double weight);

/// Bisection on (0, 0.999 * pd_weight_limit) for |center_mi - target| <= tol.
double calibrate_edge_weight(const GraphSpec& g, std::size_t center, double target_mi, double tol = 1e-4);

/// Beta(1/2, 1/2) quantile sin^2(pi u / 2) and CDF (2 / pi) asin(sqrt x).
double arcsine_quantile(double u);
double arcsine_cdf(double x);

struct CopulaSpec {
  Matrix correlation;
  double edge_weight = 0.0;
  Matrix chol;  // lower factor of correlation
};

CopulaSpec make_copula(Matrix correlation, double edge_weight = 0.0);

/// z ~ N(0, correlation), u = Phi(z), x = arcsine_quantile(u).
Matrix sample_copula(const CopulaSpec& spec, std::size_t n, Rng& rng);

}  // namespace featshift
