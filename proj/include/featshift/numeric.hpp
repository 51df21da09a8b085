#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace featshift {

/// Data matrices are n x d with one sample per row.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IndexList = std::vector<std::size_t>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kLogTwoPi = 1.83787706640934548356;

double normal_cdf(double z);
double normal_quantile(double p);
inline double normal_log_pdf(double z) { return -0.5 * z * z - 0.5 * kLogTwoPi; }

/// True iff every entry is finite.
bool all_finite(const Matrix& m);

/// Rows of `m` at `rows`, in order.
Matrix gather_rows(const Matrix& m, std::span<const std::size_t> rows);

/// Rows [begin, end) of `m`.
Matrix slice_rows(const Matrix& m, std::size_t begin, std::size_t end);

/// Vertical concatenation; column counts must match.
Matrix vstack(const Matrix& top, const Matrix& bottom);

/// Column means and (n-1)-denominator covariance.
Vector column_means(const Matrix& data);
Matrix sample_covariance(const Matrix& data, const Vector& mean);

/// log det of a symmetric positive-definite matrix via Cholesky; nullopt if
/// the factorization fails.
std::optional<double> spd_log_det(const Matrix& m);

/// Submatrix of a square matrix restricted to `idx` rows and columns.
Matrix principal_submatrix(const Matrix& m, std::span<const std::size_t> idx);

/// 0..d-1 minus the entries of `set` (which must be sorted-free of duplicates).
IndexList complement(std::span<const std::size_t> set, std::size_t d);

}  // namespace featshift
