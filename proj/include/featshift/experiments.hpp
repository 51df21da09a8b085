#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "featshift/decision.hpp"
#include "featshift/graph.hpp"
#include "featshift/metrics.hpp"
#include "featshift/preprocess.hpp"

namespace featshift {

enum class Family { Fixed, Unknown, Multi, Stream, RealData };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

struct StreamParams {
  std::size_t length = 10000;
  double onset_fraction = 0.8;
  std::size_t clean_len = 5000;
  std::vector<std::size_t> windows{400};
  std::size_t step = 50;
  std::size_t streams = 20;
  NullKind null_kind = NullKind::Time;
  std::size_t B = 500;
};

struct RealDataParams {
  std::filesystem::path csv;
  std::size_t half_window = 500;  // |X| = |Y|
  std::size_t stride = 100;
  bool shuffle = false;
  std::vector<NullKind> null_kinds{NullKind::Pooled, NullKind::Time};
  std::size_t B_pooled = 50;
  std::size_t B_time = 500;
  PreprocessFlags preprocess{true, true, true};
  bool fit_on_concat = false;
};

struct ExperimentConfig {
  Family family = Family::Unknown;
  std::vector<std::uint64_t> seeds{0};
  std::size_t replications = 100;  // per seed and cell
  std::vector<GraphKind> graphs{GraphKind::Complete, GraphKind::Cycle, GraphKind::Grid, GraphKind::Random};
  std::vector<double> mis{0.2, 0.1, 0.05, 0.01};
  std::vector<Method> methods{Method::MbSm};
  std::vector<std::size_t> attacked_sizes{1};
  std::size_t budget_k = 0;  // 0: equal to the attacked-set size
  std::size_t d = 25;
  std::size_t n = 1000;
  double alpha = 0.05;
  std::size_t B = 50;
  double attack_prob = 0.5;
  double edge_prob = 0.1;
  PooledScheme pooled_scheme = PooledScheme::WithReplacement;
  EstimatorConfig estimator{};  // method field is overridden per cell
  StreamParams stream{};
  RealDataParams realdata{};
};

/// One row of results.
struct CellResult {
  std::string graph;
  double mi = 0.0;
  Method method = Method::MbSm;
  std::size_t attacked_count = 0;
  std::size_t k = 0;
  std::size_t window = 0;
  std::string null_kind;
  bool shuffled = false;
  std::size_t trials = 0;
  std::size_t attacked_trials = 0;
  PrecisionRecall localization;  // micro precision / recall
  PrecisionRecall detection;     // trial-level stage 1
  std::optional<double> stream_recall;     // streams detected at or after onset
  std::optional<double> mean_delay;        // steps, post-onset detections
  std::size_t pre_onset_alarms = 0;
  double mean_elapsed = 0.0;               // seconds per test
};

inline constexpr int kReportSchemaVersion = 1;

struct ExperimentReport {
  int schema_version = kReportSchemaVersion;
  Family family = Family::Unknown;
  std::vector<CellResult> cells;
};

ExperimentReport run_fixed_sensor_experiment(const ExperimentConfig& cfg);
ExperimentReport run_unknown_sensor_experiment(const ExperimentConfig& cfg);
ExperimentReport run_multi_sensor_experiment(const ExperimentConfig& cfg);
ExperimentReport run_stream_experiment(const ExperimentConfig& cfg);
ExperimentReport run_realdata_experiment(const ExperimentConfig& cfg);
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Stable cell label used for seed derivation, e.g. "cycle/0.2".
std::string cell_key(GraphKind graph, double mi);

}  // namespace featshift
