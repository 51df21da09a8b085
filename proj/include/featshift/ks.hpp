#pragma once

#include <span>

namespace featshift {

/// Two-sample Kolmogorov-Smirnov distance sup_t |F_a(t) - F_b(t)|, exact.
/// Throws InvalidDataError on empty or non-finite input.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Same, for inputs already sorted ascending. No validation.
double ks_sorted(std::span<const double> a, std::span<const double> b);

/// KS between {shift_a + scale_a * za[i]} and {shift_b + scale_b * zb[j]} where
/// za, zb are sorted ascending and both scales are positive, so the affine
/// images stay sorted and no copy is needed.
double ks_affine_sorted(std::span<const double> za, double shift_a, double scale_a,
                        std::span<const double> zb, double shift_b, double scale_b);

}  // namespace featshift
