#include "featshift/ks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "featshift/error.hpp"

namespace featshift {

namespace {

// sup_t |n_b * #{a <= t} - n_a * #{b <= t}| over sorted inputs, evaluated
// only once every value equal to t has been consumed. Integer counts keep
// the result exact; one division at the end.
double merge_ks(const double* a, std::size_t n, const double* b, std::size_t m) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto nn = static_cast<std::int64_t>(n);
  const auto mm = static_cast<std::int64_t>(m);
  std::int64_t best = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n && j < m) {
    const double x = a[i];
    const double y = b[j];
    const double t = x < y ? x : y;
    i += (x == t);
    j += (y == t);
    const double xn = i < n ? a[i] : inf;
    const double yn = j < m ? b[j] : inf;
    std::int64_t diff = static_cast<std::int64_t>(i) * mm - static_cast<std::int64_t>(j) * nn;
    diff = diff < 0 ? -diff : diff;
    const bool settled = xn != t && yn != t;
    best = (settled && diff > best) ? diff : best;
  }
  // One side is exhausted: finish the tie run at the last value, after which
  // the gap only shrinks.
  if (i == n && n > 0) {
    while (j < m && b[j] <= a[n - 1]) ++j;
  } else if (j == m && m > 0) {
    while (i < n && a[i] <= b[m - 1]) ++i;
  }
  std::int64_t diff = static_cast<std::int64_t>(i) * mm - static_cast<std::int64_t>(j) * nn;
  best = std::max(best, diff < 0 ? -diff : diff);
  return static_cast<double>(best) / (static_cast<double>(n) * static_cast<double>(m));
}

void affine_into(std::span<const double> z, double shift, double scale, std::vector<double>& out) {
  out.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = shift + scale * z[i];
}

}  // namespace

double ks_sorted(std::span<const double> a, std::span<const double> b) {
  return merge_ks(a.data(), a.size(), b.data(), b.size());
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidDataError("ks_statistic: empty sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(sa.begin(), sa.end(), finite) || !std::all_of(sb.begin(), sb.end(), finite)) {
    throw InvalidDataError("ks_statistic: non-finite value");
  }
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return ks_sorted(sa, sb);
}

double ks_affine_sorted(std::span<const double> za, double shift_a, double scale_a,
                        std::span<const double> zb, double shift_b, double scale_b) {
  thread_local std::vector<double> va;
  thread_local std::vector<double> vb;
  affine_into(za, shift_a, scale_a, va);
  affine_into(zb, shift_b, scale_b, vb);
  return merge_ks(va.data(), va.size(), vb.data(), vb.size());
}

}  // namespace featshift
