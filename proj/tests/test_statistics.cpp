#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "featshift/attack.hpp"
#include "featshift/error.hpp"
#include "featshift/estimator.hpp"
#include "featshift/ks.hpp"
#include "featshift/statistics.hpp"
#include "test_support.hpp"

using namespace featshift;
using featshift::testing::column;
using featshift::testing::equicorrelation;
using featshift::testing::gaussian_rows;

namespace {

// sup_t |F_a(t) - F_b(t)| evaluated at every sample point by counting.
double ks_brute(const std::vector<double>& a, const std::vector<double>& b) {
  double best = 0.0;
  auto ecdf = [](const std::vector<double>& s, double t) {
    std::size_t c = 0;
    for (double v : s) c += v <= t;
    return static_cast<double>(c) / static_cast<double>(s.size());
  };
  for (const auto* s : {&a, &b}) {
    for (double t : *s) best = std::max(best, std::abs(ecdf(a, t) - ecdf(b, t)));
  }
  return best;
}

// The brute-force value as an exact rational, compared by cross-multiplying.
bool same_ks(double fast, const std::vector<double>& a, const std::vector<double>& b) {
  const double brute = ks_brute(a, b);
  const auto n = static_cast<long long>(a.size());
  const auto m = static_cast<long long>(b.size());
  return std::llround(fast * static_cast<double>(n * m)) == std::llround(brute * static_cast<double>(n * m)) &&
         fast == static_cast<double>(std::llround(fast * static_cast<double>(n * m))) / static_cast<double>(n * m);
}

struct AttackedPair {
  Matrix X;
  Matrix Y;
};

// Equicorrelated Gaussian (rho = 0.8), feature 0 attacked in Y.
AttackedPair attacked_pair(std::size_t d, std::size_t n, Rng& rng) {
  const Matrix cov = equicorrelation(d, 0.8);
  AttackedPair p{gaussian_rows(cov, n, rng), gaussian_rows(cov, n, rng)};
  p.Y = marginal_attack(p.Y, {0}, rng).first;
  return p;
}

}  // namespace

TEST(KsStatistic, SmallExamples) {
  const std::vector<double> a{1, 2, 3}, b{10, 11, 12};
  EXPECT_EQ(ks_statistic(a, b), 1.0);
  EXPECT_EQ(ks_statistic(a, a), 0.0);
  const std::vector<double> c{1, 3}, d{2, 4};
  EXPECT_EQ(ks_statistic(c, d), 0.5);
}

TEST(KsStatistic, RejectsEmptyAndNonFinite) {
  const std::vector<double> empty, one{1.0}, bad{1.0, NAN};
  EXPECT_THROW(ks_statistic(empty, one), InvalidDataError);
  EXPECT_THROW(ks_statistic(one, bad), InvalidDataError);
}

TEST(KsStatistic, EqualsBruteForceOnRandomSmallPairs) {
  Rng rng(2024);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.index(12);
    const std::size_t m = 1 + rng.index(12);
    std::vector<double> a(n), b(m);
    // Small integer support forces ties within and across samples.
    for (auto& v : a) v = static_cast<double>(rng.index(6));
    for (auto& v : b) v = static_cast<double>(rng.index(6)) + (t % 3 == 0 ? 0.5 : 0.0);
    const double fast = ks_statistic(a, b);
    ASSERT_TRUE(same_ks(fast, a, b)) << "trial " << t << ": " << fast << " vs " << ks_brute(a, b);
    ASSERT_EQ(fast, ks_statistic(b, a));
  }
}

TEST(KsStatistic, AffineVariantMatchesDirect) {
  Rng rng(3);
  std::vector<double> za(200), zb(150);
  for (auto& v : za) v = rng.normal();
  for (auto& v : zb) v = rng.normal();
  std::sort(za.begin(), za.end());
  std::sort(zb.begin(), zb.end());
  std::vector<double> a(za.size()), b(zb.size());
  std::transform(za.begin(), za.end(), a.begin(), [](double z) { return 0.3 + 1.7 * z; });
  std::transform(zb.begin(), zb.end(), b.begin(), [](double z) { return -0.2 + 0.9 * z; });
  EXPECT_EQ(ks_affine_sorted(za, 0.3, 1.7, zb, -0.2, 0.9), ks_statistic(a, b));
}

TEST(EvalSet, SizesAndDeterminism) {
  Rng rng(1);
  const Matrix X = Matrix::Random(1000, 3);
  const Matrix Y = Matrix::Random(1000, 3);
  Rng r1(5), r2(5);
  const EvalSet e1 = make_eval_set(X, Y, 30, r1);
  const EvalSet e2 = make_eval_set(X, Y, 30, r2);
  EXPECT_EQ(e1.size(), 60u);
  EXPECT_EQ(e1.from_x, 30u);
  EXPECT_EQ(e1.from_y, 30u);
  EXPECT_EQ(e1.points, e2.points);
}

TEST(EvalSet, FullDrawIsAPermutation) {
  Matrix X(30, 1), Y(30, 1);
  for (int i = 0; i < 30; ++i) {
    X(i, 0) = i;
    Y(i, 0) = 100 + i;
  }
  Rng rng(2);
  const EvalSet e = make_eval_set(X, Y, 30, rng);
  std::vector<double> fx = column(e.points.topRows(30), 0);
  std::vector<double> fy = column(e.points.bottomRows(30), 0);
  std::sort(fx.begin(), fx.end());
  std::sort(fy.begin(), fy.end());
  for (int i = 0; i < 30; ++i) {
    EXPECT_EQ(fx[static_cast<std::size_t>(i)], i);
    EXPECT_EQ(fy[static_cast<std::size_t>(i)], 100 + i);
  }
}

TEST(EvalSet, SmallSideDrawsWithReplacement) {
  const Matrix X = Matrix::Random(5, 2);
  const Matrix Y = Matrix::Random(40, 2);
  Rng rng(3);
  const EvalSet e = make_eval_set(X, Y, 30, rng);
  EXPECT_EQ(e.from_x, 30u);
  EXPECT_EQ(e.size(), 60u);
}

TEST(EcdScore, IdenticalModelsGiveZero) {
  Rng rng(4);
  const Matrix X = gaussian_rows(equicorrelation(3, 0.3), 200, rng);
  const DensityModel p = fit_gaussian(X);
  const EvalSet e = make_eval_set(X, X, 10, rng);
  EXPECT_TRUE(ecd_score(p, p, e).values.isZero(0));
}

TEST(EcdScore, ShiftedGaussianGivesSquaredShift) {
  const DensityModel p = GaussianModel::from_moments(Vector::Zero(1), Matrix::Identity(1, 1));
  const DensityModel q = GaussianModel::from_moments(Vector::Ones(1), Matrix::Identity(1, 1));
  Rng rng(6);
  const Matrix pts = gaussian_rows(Matrix::Identity(1, 1) * 9.0, 40, rng);
  EvalSet e{pts, 20, 20};
  const FeatureStats s = ecd_score(p, q, e);
  EXPECT_NEAR(s.values(0), 1.0, 1e-12);
  EXPECT_EQ(s.method, Method::MbSm);
  EXPECT_EQ(s.eval_points, 40u);
}

TEST(EcdScore, SumEqualsFisherDivergence) {
  Rng rng(7);
  const Matrix X = gaussian_rows(equicorrelation(5, 0.4), 300, rng);
  const Matrix Y = gaussian_rows(equicorrelation(5, 0.1), 300, rng);
  const DensityModel p = fit_gaussian(X);
  const DensityModel q = fit_gaussian(Y);
  const EvalSet e = make_eval_set(X, Y, 30, rng);
  EXPECT_NEAR(ecd_score(p, q, e).values.sum(), fisher_divergence(p, q, e), 1e-12);
}

TEST(EcdScore, DimensionMismatchIsShapeError) {
  const DensityModel p = GaussianModel::from_moments(Vector::Zero(2), Matrix::Identity(2, 2));
  const DensityModel q = GaussianModel::from_moments(Vector::Zero(3), Matrix::Identity(3, 3));
  EvalSet e{Matrix::Zero(2, 2), 1, 1};
  EXPECT_THROW(ecd_score(p, q, e), ShapeError);
}

TEST(EcdScore, AttackedFeatureRanksFirst) {
  int wins = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng(derive_seed(10, "score-rank", t));
    const AttackedPair d = attacked_pair(3, 2000, rng);
    const EvalSet e = make_eval_set(d.X, d.Y, 30, rng);
    const Vector g = ecd_score(fit_gaussian(d.X), fit_gaussian(d.Y), e).values;
    wins += g(0) > g(1) && g(0) > g(2);
  }
  EXPECT_GE(wins, 95);
}

TEST(EcdMbKs, SameSeedGivesZero) {
  const auto p = GaussianModel::from_moments(Vector::Zero(3), equicorrelation(3, 0.5));
  Rng rng(1);
  const EvalSet e{gaussian_rows(equicorrelation(3, 0.5), 6, rng), 3, 3};
  Rng a(11), b(11);
  EXPECT_TRUE(ecd_mb_ks(p, p, e, 1000, a, b).values.isZero(0));
}

TEST(EcdMbKs, IndependentDrawsStayBelowNullQuantile) {
  const auto p = GaussianModel::from_moments(Vector::Zero(4), equicorrelation(4, 0.5));
  Rng rng(12);
  const EvalSet e{gaussian_rows(equicorrelation(4, 0.5), 60, rng), 30, 30};
  const FeatureStats s = ecd_mb_ks(p, p, e, 1000, rng);
  for (Eigen::Index j = 0; j < 4; ++j) EXPECT_LT(s.values(j), 0.087);
  EXPECT_EQ(s.method, Method::MbKs);
}

TEST(EcdMbKs, AttackedFeatureRanksFirst) {
  int wins = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng(derive_seed(10, "mbks-rank", t));
    const AttackedPair d = attacked_pair(3, 2000, rng);
    const EvalSet e = make_eval_set(d.X, d.Y, 30, rng);
    const Vector g = ecd_mb_ks(fit_gaussian(d.X), fit_gaussian(d.Y), e, 1000, rng).values;
    wins += g(0) > g(1) && g(0) > g(2);
  }
  EXPECT_GE(wins, 90);
}

TEST(NearestRows, BruteForceExample) {
  Matrix X(4, 2);
  X << 0, 0, 0, 1, 10, 0, 10, 1;
  Vector x(2);
  x << 0, 0.5;
  // Distance on coordinate 0 only (feature 1 is skipped).
  EXPECT_EQ(nearest_rows(X, x, 1, 2), (IndexList{0, 1}));
  // Skipping coordinate 0 ties rows {0, 2} and {1, 3}; lower index wins.
  Vector y(2);
  y << 5, 0;
  EXPECT_EQ(nearest_rows(X, y, 0, 2), (IndexList{0, 2}));
}

TEST(NearestRows, MatchesFullSortOracle) {
  Rng rng(13);
  Matrix X(200, 4);
  for (auto& v : X.reshaped()) v = static_cast<double>(rng.index(5));
  for (int t = 0; t < 50; ++t) {
    Vector x(4);
    for (auto& v : x) v = static_cast<double>(rng.index(5));
    const std::size_t skip = rng.index(4);
    const std::size_t k = 1 + rng.index(30);
    std::vector<std::pair<double, std::size_t>> all;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      double dist = 0.0;
      for (Eigen::Index c = 0; c < 4; ++c) {
        if (static_cast<std::size_t>(c) != skip) dist += (X(i, c) - x(c)) * (X(i, c) - x(c));
      }
      all.emplace_back(dist, static_cast<std::size_t>(i));
    }
    std::sort(all.begin(), all.end());
    IndexList expected;
    for (std::size_t i = 0; i < k; ++i) expected.push_back(all[i].second);
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(nearest_rows(X, x, skip, k), expected);
  }
}

TEST(EcdKnnKs, IdenticalSamplesWithFullNeighbourhood) {
  Rng rng(14);
  const Matrix X = gaussian_rows(equicorrelation(3, 0.5), 50, rng);
  const EvalSet e = make_eval_set(X, X, 10, rng);
  EXPECT_TRUE(ecd_knn_ks(X, X, 50, e).values.isZero(0));
  EXPECT_THROW(ecd_knn_ks(X, X, 51, e), InvalidArgumentError);
}

TEST(EcdKnnKs, AttackedFeatureHasLargerMean) {
  Vector total = Vector::Zero(3);
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng(derive_seed(10, "knn-rank", t));
    const AttackedPair d = attacked_pair(3, 2000, rng);
    const EvalSet e = make_eval_set(d.X, d.Y, 30, rng);
    total += ecd_knn_ks(d.X, d.Y, 45, e).values;
  }
  EXPECT_GT(total(0), total(1));
  EXPECT_GT(total(0), total(2));
}

TEST(MarginalKs, Examples) {
  Rng rng(15);
  const Matrix X = gaussian_rows(Matrix::Identity(2, 2), 1000, rng);
  EXPECT_TRUE(marginal_ks(X, X).values.isZero(0));
  const Matrix attacked = marginal_attack(X, {1}, rng).first;
  EXPECT_EQ(marginal_ks(X, attacked).values(1), 0.0);
  Matrix Y = gaussian_rows(Matrix::Identity(2, 2), 1000, rng);
  Y.col(0).array() += 1.0;
  EXPECT_NEAR(marginal_ks(X, Y).values(0), 2.0 * normal_cdf(0.5) - 1.0, 0.1);
  EXPECT_THROW(marginal_ks(X, Matrix::Zero(10, 3)), ShapeError);
}

TEST(Estimators, NullStatisticsShrinkWithSampleSize) {
  for (Method method : {Method::MbSm, Method::MbKs, Method::KnnKs, Method::MarginalKs}) {
    EstimatorConfig cfg;
    cfg.method = method;
    std::vector<double> small, large;
    for (std::uint64_t t = 0; t < 50; ++t) {
      Rng rng(derive_seed(20, "shrink", t));
      const Matrix cov = equicorrelation(3, 0.5);
      const Matrix xs = gaussian_rows(cov, 200, rng), ys = gaussian_rows(cov, 200, rng);
      const Matrix xl = gaussian_rows(cov, 2000, rng), yl = gaussian_rows(cov, 2000, rng);
      small.push_back(compute_stats(xs, ys, cfg, rng).values.mean());
      large.push_back(compute_stats(xl, yl, cfg, rng).values.mean());
    }
    EXPECT_LT(featshift::testing::median(large), featshift::testing::median(small)) << to_string(method);
  }
}

TEST(Estimators, ValuesAreFiniteAndNonNegative) {
  Rng rng(21);
  const Matrix X = gaussian_rows(equicorrelation(4, 0.3), 300, rng);
  const Matrix Y = gaussian_rows(equicorrelation(4, 0.6), 300, rng);
  for (Method method : {Method::MbSm, Method::MbKs, Method::KnnKs, Method::MarginalKs}) {
    EstimatorConfig cfg;
    cfg.method = method;
    const FeatureStats s = compute_stats(X, Y, cfg, rng);
    EXPECT_EQ(s.dim(), 4u);
    EXPECT_TRUE(s.values.allFinite());
    EXPECT_GE(s.values.minCoeff(), 0.0);
  }
}

TEST(Estimators, ColumnPermutationPermutesStatistics) {
  Rng data_rng(22);
  const Matrix X = gaussian_rows(equicorrelation(4, 0.5), 400, data_rng);
  const Matrix Y = marginal_attack(gaussian_rows(equicorrelation(4, 0.5), 400, data_rng), {2}, data_rng).first;
  const std::vector<Eigen::Index> perm{3, 0, 2, 1};
  Matrix Xp(X.rows(), 4), Yp(Y.rows(), 4);
  for (Eigen::Index c = 0; c < 4; ++c) {
    Xp.col(c) = X.col(perm[static_cast<std::size_t>(c)]);
    Yp.col(c) = Y.col(perm[static_cast<std::size_t>(c)]);
  }
  for (Method method : {Method::MbSm, Method::KnnKs, Method::MarginalKs}) {
    EstimatorConfig cfg;
    cfg.method = method;
    Rng a(5), b(5);
    const Vector g = compute_stats(X, Y, cfg, a).values;
    const Vector gp = compute_stats(Xp, Yp, cfg, b).values;
    for (Eigen::Index c = 0; c < 4; ++c) {
      EXPECT_NEAR(gp(c), g(perm[static_cast<std::size_t>(c)]), 1e-9 * (1.0 + std::abs(g(perm[static_cast<std::size_t>(c)]))))
          << to_string(method);
    }
  }
}

TEST(Method, NamesRoundTrip) {
  for (Method m : {Method::MbSm, Method::MbKs, Method::KnnKs, Method::MarginalKs}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_THROW(parse_method("mmd"), ConfigError);
}
