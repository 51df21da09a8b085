#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "featshift/attack.hpp"
#include "featshift/bootstrap.hpp"
#include "featshift/decision.hpp"
#include "featshift/error.hpp"
#include "featshift/scenario.hpp"
#include "test_support.hpp"

using namespace featshift;
using featshift::testing::equicorrelation;
using featshift::testing::gaussian_rows;

namespace {

FeatureStats stats_of(std::initializer_list<double> v) {
  FeatureStats s;
  s.values = featshift::testing::std_vector(std::vector<double>(v));
  return s;
}

Thresholds thresholds_of(std::initializer_list<double> v) {
  Thresholds t;
  t.per_feature = featshift::testing::std_vector(std::vector<double>(v));
  return t;
}

}  // namespace

TEST(Thresholds, ConstantColumnGivesConstant) {
  NullDistribution null;
  null.stats = Matrix::Constant(20, 3, 0.7);
  const Thresholds t = thresholds_from_null(null, 0.05, true);
  EXPECT_TRUE((t.per_feature.array() == 0.7).all());
}

TEST(Thresholds, OrderIndexArithmetic) {
  EXPECT_EQ(order_statistic_index(50, 0.05 / 25), 50u);
  EXPECT_EQ(order_statistic_index(500, 0.05), 475u);
  EXPECT_EQ(order_statistic_index(10, 0.999999), 1u);
  NullDistribution null;
  null.stats = Matrix::Random(50, 25).cwiseAbs();
  const Thresholds t = thresholds_from_null(null, 0.05, true);
  EXPECT_EQ(t.order_index, 50u);
  EXPECT_DOUBLE_EQ(t.level, 0.002);
  EXPECT_TRUE(t.corrected);
  EXPECT_TRUE(t.per_feature.isApprox(null.stats.colwise().maxCoeff().transpose()));
}

TEST(Thresholds, MatchesFullSortOracle) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t B = 1 + rng.index(600);
    const std::size_t d = 1 + rng.index(8);
    NullDistribution null;
    null.stats.resize(static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(d));
    for (auto& v : null.stats.reshaped()) v = rng.uniform();
    const double alpha = 0.01 + 0.2 * rng.uniform();
    const bool corrected = trial % 2 == 0;
    const Thresholds t = thresholds_from_null(null, alpha, corrected);
    const double level = corrected ? alpha / static_cast<double>(d) : alpha;
    const auto idx = static_cast<std::size_t>(
        std::clamp(std::ceil((1.0 - level) * static_cast<double>(B) - 1e-9), 1.0, static_cast<double>(B)));
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<double> col = featshift::testing::column(null.stats, static_cast<Eigen::Index>(j));
      std::sort(col.begin(), col.end());
      EXPECT_EQ(t.per_feature(static_cast<Eigen::Index>(j)), col[idx - 1]);
    }
  }
  NullDistribution b500;
  b500.stats.resize(500, 1);
  for (auto& v : b500.stats.reshaped()) v = rng.normal();
  std::vector<double> col = featshift::testing::column(b500.stats, 0);
  std::sort(col.begin(), col.end());
  EXPECT_EQ(thresholds_from_null(b500, 0.05, false).per_feature(0), col[474]);
}

TEST(Thresholds, RejectsBadAlpha) {
  NullDistribution null;
  null.stats = Matrix::Ones(5, 2);
  EXPECT_THROW(thresholds_from_null(null, 0.0, true), InvalidArgumentError);
  EXPECT_THROW(thresholds_from_null(null, 1.0, true), InvalidArgumentError);
}

TEST(Detect, StrictInequality) {
  EXPECT_TRUE(detect(stats_of({0.1, 0.5}), thresholds_of({0.2, 0.4})));
  EXPECT_FALSE(detect(stats_of({0.2, 0.4}), thresholds_of({0.2, 0.4})));
  EXPECT_FALSE(detect(stats_of({0.1, 0.3}), thresholds_of({0.2, 0.4})));
  EXPECT_THROW(detect(stats_of({0.1}), thresholds_of({0.2, 0.4})), ShapeError);
}

TEST(Localize, TopKWithLowerIndexTieRule) {
  EXPECT_EQ(localize(stats_of({3, 1, 2}), 1), (IndexList{0}));
  EXPECT_EQ(localize(stats_of({3, 1, 2}), 2), (IndexList{0, 2}));
  EXPECT_EQ(localize(stats_of({2, 2, 1}), 1), (IndexList{0}));
  EXPECT_EQ(localize(stats_of({1, 2, 2, 2}), 2), (IndexList{1, 2}));
}

TEST(Decide, StageTwoNeedsStageOne) {
  const DetectionReport quiet = decide(stats_of({0.1, 0.3}), thresholds_of({0.2, 0.4}), 1);
  EXPECT_FALSE(quiet.detected);
  EXPECT_TRUE(quiet.localized.empty());
  const DetectionReport loud = decide(stats_of({0.1, 0.5, 0.05}), thresholds_of({0.2, 0.4, 0.1}), 3);
  EXPECT_TRUE(loud.detected);
  EXPECT_EQ(loud.localized, (IndexList{1, 0, 2}));
}

TEST(BootstrapPooled, ContractAndDeterminism) {
  Rng data(1);
  const Matrix X = gaussian_rows(equicorrelation(3, 0.5), 100, data);
  EstimatorConfig cfg;
  Rng r0(3);
  const NullDistribution one = bootstrap_null_pooled(X, X, 1, cfg, r0);
  EXPECT_EQ(one.replicates(), 1u);
  EXPECT_TRUE(one.stats.allFinite());
  EXPECT_GE(one.stats.minCoeff(), 0.0);
  for (PooledScheme scheme : {PooledScheme::WithReplacement, PooledScheme::PermutationSplit}) {
    Rng a(9), b(9);
    EXPECT_EQ(bootstrap_null_pooled(X, X, 20, cfg, a, scheme).stats, bootstrap_null_pooled(X, X, 20, cfg, b, scheme).stats);
  }
  Rng r1(4);
  EXPECT_THROW(bootstrap_null_pooled(X, X, 0, cfg, r1), InvalidArgumentError);
}

TEST(BootstrapPooled, ReplicateErrorsNameTheReplicate) {
  Matrix X = Matrix::Zero(3, 2);
  EstimatorConfig cfg;
  cfg.method = Method::KnnKs;
  cfg.knn_k = 10;  // more neighbours than rows
  Rng rng(1);
  try {
    bootstrap_null_pooled(X, X, 4, cfg, rng);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("bootstrap replicate"), std::string::npos);
  }
}

TEST(BootstrapTime, DegenerateRangeRepeatsOneSplit) {
  Rng data(2);
  const Matrix clean = gaussian_rows(equicorrelation(3, 0.5), 200, data);
  EstimatorConfig cfg;
  cfg.method = Method::MarginalKs;
  Rng rng(5);
  const NullDistribution null = bootstrap_null_time(clean, 100, 10, cfg, rng);
  for (Eigen::Index b = 1; b < 10; ++b) EXPECT_EQ(null.stats.row(b), null.stats.row(0));
  Rng r2(6);
  EXPECT_THROW(bootstrap_null_time(clean, 101, 10, cfg, r2), InsufficientDataError);
}

TEST(BootstrapTime, AgreesWithPooledOnIidData) {
  Rng data(7);
  const Matrix clean = gaussian_rows(equicorrelation(4, 0.5), 6000, data);
  EstimatorConfig cfg;
  Rng a(1), b(2);
  const Thresholds time = thresholds_from_null(bootstrap_null_time(clean, 300, 500, cfg, a), 0.05, false);
  const Thresholds pooled = thresholds_from_null(
      bootstrap_null_pooled(clean.topRows(300), clean.middleRows(300, 300), 500, cfg, b), 0.05, false);
  for (Eigen::Index j = 0; j < 4; ++j) {
    EXPECT_NEAR(time.per_feature(j) / pooled.per_feature(j), 1.0, 0.2) << "feature " << j;
  }
}

TEST(BootstrapTime, DriftRaisesUpperQuantiles) {
  Rng data(8);
  Matrix clean = gaussian_rows(equicorrelation(3, 0.5), 4000, data);
  for (Eigen::Index i = 0; i < clean.rows(); ++i) {
    const double t = static_cast<double>(i) / 4000.0;
    clean(i, 0) += 40.0 * t;
    clean(i, 1) *= std::exp(6.0 * t);
    clean(i, 2) += 5.0 * std::sin(60.0 * t);
  }
  EstimatorConfig cfg;
  cfg.method = Method::MarginalKs;
  Rng a(1), b(2);
  const Thresholds time = thresholds_from_null(bootstrap_null_time(clean, 200, 200, cfg, a), 0.05, false);
  const Thresholds pooled = thresholds_from_null(
      bootstrap_null_pooled(clean.topRows(200), clean.middleRows(200, 200), 200, cfg, b), 0.05, false);
  for (Eigen::Index j = 0; j < 3; ++j) EXPECT_GT(time.per_feature(j), pooled.per_feature(j));
}

TEST(TwoStageTest, IdenticalSamplesRarelyDetect) {
  int detections = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng(derive_seed(40, "identical", t));
    const Matrix X = gaussian_rows(equicorrelation(5, 0.5), 200, rng);
    TestConfig cfg;
    detections += two_stage_test(X, X, cfg, rng).detected;
  }
  EXPECT_LE(detections, 5);
}

TEST(TwoStageTest, BudgetEqualToDimensionLocalizesEverything) {
  Rng rng(41);
  const Matrix X = gaussian_rows(equicorrelation(4, 0.8), 500, rng);
  const Matrix Y = marginal_attack(gaussian_rows(equicorrelation(4, 0.8), 500, rng), {1}, rng).first;
  TestConfig cfg;
  cfg.k = 4;
  const DetectionReport r = two_stage_test(X, Y, cfg, rng);
  ASSERT_TRUE(r.detected);
  IndexList sorted = r.localized;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (IndexList{0, 1, 2, 3}));
}

TEST(TwoStageTest, CopulaAttackIsUsuallyFoundAndLocalized) {
  const Scenario sc = make_scenario(GraphKind::Complete, 25, 0.2, 3);
  int hits = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    Rng rng(derive_seed(42, "copula", t));
    const Matrix X = sample_copula(sc.copula, 1000, rng);
    const std::size_t j = rng.index(25);
    const Matrix Y = marginal_attack(sample_copula(sc.copula, 1000, rng), {j}, rng).first;
    const DetectionReport r = two_stage_test(X, Y, TestConfig{}, rng);
    hits += r.detected && r.localized == IndexList{j};
  }
  EXPECT_GT(hits, 10);
}

TEST(TwoStageTest, DeterministicAndMonotoneInAlpha) {
  Rng data(43);
  const Matrix X = gaussian_rows(equicorrelation(6, 0.6), 300, data);
  const Matrix Y = marginal_attack(gaussian_rows(equicorrelation(6, 0.6), 300, data), {2}, data).first;
  TestConfig cfg;
  Rng a(7), b(7);
  const DetectionReport ra = two_stage_test(X, Y, cfg, a);
  const DetectionReport rb = two_stage_test(X, Y, cfg, b);
  EXPECT_EQ(ra.detected, rb.detected);
  EXPECT_EQ(ra.localized, rb.localized);
  EXPECT_EQ(ra.stats.values, rb.stats.values);
  EXPECT_EQ(ra.thresholds.per_feature, rb.thresholds.per_feature);

  bool previous = false;
  for (double alpha : {0.001, 0.01, 0.05, 0.2, 0.5, 0.9}) {
    TestConfig c = cfg;
    c.alpha = alpha;
    Rng r(7);
    const bool now = two_stage_test(X, Y, c, r).detected;
    EXPECT_TRUE(now || !previous) << "alpha " << alpha;
    previous = now;
  }
}

TEST(TwoStageTest, LocalizedSetIsTopK) {
  for (std::uint64_t t = 0; t < 20; ++t) {
    Rng rng(derive_seed(44, "topk", t));
    const Matrix X = gaussian_rows(equicorrelation(5, 0.7), 300, rng);
    const Matrix Y = marginal_attack(gaussian_rows(equicorrelation(5, 0.7), 300, rng), {0, 3}, rng).first;
    TestConfig cfg;
    cfg.k = 2;
    const DetectionReport r = two_stage_test(X, Y, cfg, rng);
    if (!r.detected) {
      EXPECT_TRUE(r.localized.empty());
      continue;
    }
    ASSERT_EQ(r.localized.size(), 2u);
    for (std::size_t j : r.localized) {
      int larger = 0;
      for (Eigen::Index i = 0; i < 5; ++i) larger += r.stats.values(i) > r.stats.values(static_cast<Eigen::Index>(j));
      EXPECT_LT(larger, 2);
    }
  }
}

TEST(TwoStageTest, TimeNullNeedsCleanSeries) {
  Rng rng(45);
  const Matrix X = gaussian_rows(Matrix::Identity(2, 2), 50, rng);
  TestConfig cfg;
  cfg.null_kind = NullKind::Time;
  EXPECT_THROW(two_stage_test(X, X, cfg, rng), ConfigError);
  const Matrix clean = gaussian_rows(Matrix::Identity(2, 2), 200, rng);
  EXPECT_NO_THROW(two_stage_test(X, X, cfg, rng, &clean));
}

// Level of the stage-1 test with the default B = 50 and Bonferroni over
// d = 25 copula features.
TEST(TwoStageTest, CleanFalsePositiveRateWithFiftyReplicates) {
  const Scenario sc = make_scenario(GraphKind::Complete, 25, 0.2, 11);
  int detections = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng(derive_seed(46, "level", t));
    const Matrix X = sample_copula(sc.copula, 1000, rng);
    const Matrix Y = sample_copula(sc.copula, 1000, rng);
    detections += two_stage_test(X, Y, TestConfig{}, rng).detected;
  }
  EXPECT_LE(detections, 10);
}

TEST(NullKind, NamesRoundTrip) {
  EXPECT_EQ(parse_null_kind("pooled"), NullKind::Pooled);
  EXPECT_EQ(parse_null_kind(to_string(NullKind::Time)), NullKind::Time);
  EXPECT_THROW(parse_null_kind("simple"), ConfigError);
}
