#include <gtest/gtest.h>

#include <filesystem>

#include "featshift/bootstrap.hpp"
#include "featshift/copula.hpp"
#include "featshift/csv.hpp"
#include "featshift/error.hpp"
#include "featshift/experiments.hpp"
#include "featshift/metrics.hpp"
#include "featshift/scenario.hpp"

using namespace featshift;

namespace {

ExperimentConfig small_config(Family family) {
  ExperimentConfig cfg;
  cfg.family = family;
  cfg.graphs = {GraphKind::Cycle};
  cfg.mis = {0.2};
  cfg.replications = 40;
  cfg.n = 300;
  cfg.d = 9;
  return cfg;
}

// Union bound over features of the exact per-feature exceedance of an
// exchangeable null: P(stat > idx-th of B) <= (B - idx + 1) / (B + 1).
double union_level(std::size_t B, double level, std::size_t features) {
  const std::size_t idx = order_statistic_index(B, level);
  return static_cast<double>(features) * static_cast<double>(B - idx + 1) / static_cast<double>(B + 1);
}

double false_positive_rate(const CellResult& cell) {
  const Confusion& c = cell.detection.counts;
  return static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn);
}

}  // namespace

TEST(MicroPr, PerfectPredictions) {
  const std::vector<TrialOutcome> trials{{{1}, {1}, true, true}, {{0, 2}, {0, 2}, true, true}};
  const PrecisionRecall pr = micro_pr(trials, 3);
  EXPECT_EQ(pr.precision, 1.0);
  EXPECT_EQ(pr.recall, 1.0);
  EXPECT_FALSE(pr.degenerate);
}

TEST(MicroPr, HandSummedTwoTrials) {
  const std::vector<TrialOutcome> trials{{{0}, {0}, true, true}, {{1}, {2}, true, true}};
  const PrecisionRecall pr = micro_pr(trials, 3);
  EXPECT_EQ(pr.counts.tp, 1u);
  EXPECT_EQ(pr.counts.fp, 1u);
  EXPECT_EQ(pr.counts.fn, 1u);
  EXPECT_EQ(pr.counts.tn, 3u);
  EXPECT_EQ(pr.precision, 0.5);
  EXPECT_EQ(pr.recall, 0.5);
}

TEST(MicroPr, NoAttacksNoPredictionsIsDegenerate) {
  const std::vector<TrialOutcome> trials(4);
  const PrecisionRecall pr = micro_pr(trials, 5);
  EXPECT_EQ(pr.precision, 0.0);
  EXPECT_EQ(pr.recall, 0.0);
  EXPECT_TRUE(pr.degenerate);
  EXPECT_EQ(pr.counts.tn, 20u);
  EXPECT_THROW(micro_pr(trials, 0), InvalidArgumentError);
}

TEST(MicroPr, CountsReconcileWithTrialsTimesD) {
  Rng rng(1);
  std::vector<TrialOutcome> trials(200);
  for (auto& t : trials) {
    for (std::size_t j = 0; j < 7; ++j) {
      if (rng.uniform() < 0.3) t.predicted.push_back(j);
      if (rng.uniform() < 0.2) t.truth.push_back(j);
    }
    t.detected = !t.predicted.empty();
  }
  const PrecisionRecall pr = micro_pr(trials, 7);
  EXPECT_EQ(pr.counts.total(), 200u * 7u);
  EXPECT_GE(pr.precision, 0.0);
  EXPECT_LE(pr.recall, 1.0);
}

TEST(DetectionPr, TrialLevelConfusion) {
  const std::vector<TrialOutcome> trials{
      {{}, {}, true, true}, {{}, {}, true, false}, {{}, {}, false, true}, {{}, {}, false, false}, {{}, {}, true, true}};
  const PrecisionRecall pr = detection_pr(trials);
  EXPECT_EQ(pr.counts.tp, 2u);
  EXPECT_EQ(pr.counts.fp, 1u);
  EXPECT_EQ(pr.counts.fn, 1u);
  EXPECT_EQ(pr.counts.tn, 1u);
  EXPECT_DOUBLE_EQ(pr.precision, 2.0 / 3.0);
}

TEST(CellKey, Format) {
  EXPECT_EQ(cell_key(GraphKind::Cycle, 0.2), "cycle/0.2");
  EXPECT_EQ(cell_key(GraphKind::Random, 0.01), "random/0.01");
}

TEST(Experiments, FixedSensorCleanOnlyLevel) {
  ExperimentConfig cfg = small_config(Family::Fixed);
  cfg.attack_prob = 0.0;
  cfg.replications = 100;
  const ExperimentReport report = run_experiment(cfg);
  ASSERT_EQ(report.cells.size(), 1u);
  const CellResult& cell = report.cells[0];
  EXPECT_EQ(cell.attacked_trials, 0u);
  EXPECT_EQ(cell.detection.recall, 0.0);
  EXPECT_TRUE(cell.detection.degenerate);
  EXPECT_LE(false_positive_rate(cell), cfg.alpha + 0.05);
}

TEST(Experiments, UnknownSensorCleanOnlyBoundedByUnionLevel) {
  ExperimentConfig cfg = small_config(Family::Unknown);
  cfg.attack_prob = 0.0;
  cfg.replications = 100;
  cfg.B = 500;
  const CellResult cell = run_experiment(cfg).cells.at(0);
  EXPECT_EQ(cell.localization.counts.tp, 0u);
  EXPECT_EQ(cell.localization.counts.total(), 100u * cfg.d);
  // Binomial(100, p) upper tail slack of three standard deviations.
  const double bound = union_level(cfg.B, cfg.alpha / static_cast<double>(cfg.d), cfg.d);
  EXPECT_LE(false_positive_rate(cell), bound + 3.0 * std::sqrt(bound * (1 - bound) / 100.0));
}

TEST(Experiments, UnknownSensorAttacksAreFoundAndDeterministic) {
  ExperimentConfig cfg = small_config(Family::Unknown);
  cfg.methods = {Method::MbSm, Method::MarginalKs};
  const ExperimentReport a = run_experiment(cfg);
  const ExperimentReport b = run_experiment(cfg);
  ASSERT_EQ(a.cells.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(a.cells[i].localization.counts.tp, b.cells[i].localization.counts.tp);
    EXPECT_EQ(a.cells[i].detection.counts.fp, b.cells[i].detection.counts.fp);
    EXPECT_EQ(a.cells[i].localization.counts.total(), cfg.replications * cfg.d);
    EXPECT_EQ(a.cells[i].trials, cfg.replications);
  }
  EXPECT_GT(a.cells[0].localization.recall, 0.7);
  EXPECT_LT(a.cells[1].localization.recall, 0.2);
  // Paired design: both methods see the same attack coins.
  EXPECT_EQ(a.cells[0].attacked_trials, a.cells[1].attacked_trials);
}

TEST(Experiments, MultiSensorFullBudgetRecallIsOneWhenDetected) {
  ExperimentConfig cfg = small_config(Family::Multi);
  cfg.attacked_sizes = {3};
  cfg.budget_k = cfg.d;
  cfg.replications = 20;
  const CellResult cell = run_experiment(cfg).cells.at(0);
  const Confusion& det = cell.detection.counts;
  const Confusion& loc = cell.localization.counts;
  EXPECT_EQ(loc.fn, 3 * det.fn);
  EXPECT_EQ(loc.tp, 3 * det.tp);
  EXPECT_EQ(cell.k, cfg.d);
}

TEST(Experiments, EmptyGridIsAConfigError) {
  ExperimentConfig cfg = small_config(Family::Unknown);
  cfg.mis.clear();
  EXPECT_THROW(run_experiment(cfg), ConfigError);
  cfg = small_config(Family::Unknown);
  cfg.graphs.clear();
  EXPECT_THROW(run_experiment(cfg), ConfigError);
}

TEST(Experiments, StreamBookkeeping) {
  ExperimentConfig cfg = small_config(Family::Stream);
  cfg.d = 9;
  cfg.mis = {0.5};
  cfg.attacked_sizes = {3};
  cfg.stream.length = 3000;
  cfg.stream.clean_len = 1000;
  cfg.stream.onset_fraction = 0.8;
  cfg.stream.windows = {200};
  cfg.stream.streams = 3;
  cfg.stream.B = 100;
  const CellResult cell = run_experiment(cfg).cells.at(0);
  EXPECT_EQ(cell.window, 200u);
  EXPECT_EQ(cell.null_kind, "time");
  ASSERT_TRUE(cell.stream_recall.has_value());
  EXPECT_GE(*cell.stream_recall, 0.0);
  EXPECT_LE(*cell.stream_recall, 1.0);
  // Steps per stream after differencing: 2999 rows, 999 clean.
  const std::size_t steps = (2999 - 999 - 200) / 50 + 1;
  EXPECT_EQ(cell.trials, 3 * steps);
  EXPECT_EQ(cell.localization.counts.total(), 3 * steps * cfg.d);
}

TEST(Experiments, RealDataBookkeepingAndDeterminism) {
  const Scenario sc = make_scenario(GraphKind::Cycle, 4, 0.2, 0);
  Rng rng(3);
  const Matrix data = sample_copula(sc.copula, 1200, rng);
  const auto path = std::filesystem::temp_directory_path() / "featshift_realdata_test.csv";
  write_csv(path, default_header(4), data);
  ExperimentConfig cfg;
  cfg.family = Family::RealData;
  cfg.realdata.csv = path;
  cfg.realdata.half_window = 100;
  cfg.realdata.stride = 100;
  cfg.realdata.B_time = 100;
  const ExperimentReport a = run_experiment(cfg);
  const ExperimentReport b = run_experiment(cfg);
  std::filesystem::remove(path);
  ASSERT_EQ(a.cells.size(), 2u);
  EXPECT_EQ(a.cells[0].null_kind, "pooled");
  EXPECT_EQ(a.cells[0].trials, 10u);  // floor((1200 - 200) / 100) raw-row windows
  EXPECT_EQ(a.cells[0].attacked_trials, 5u);
  EXPECT_EQ(a.cells[1].null_kind, "time");
  EXPECT_EQ(a.cells[1].trials, 4u);  // second half only
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(a.cells[i].detection.counts.total(), a.cells[i].trials);
    EXPECT_EQ(a.cells[i].detection.counts.tp, b.cells[i].detection.counts.tp);
    EXPECT_EQ(a.cells[i].localization.counts.fp, b.cells[i].localization.counts.fp);
  }
}
