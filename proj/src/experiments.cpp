#include "featshift/experiments.hpp"

#include <chrono>
#include <numeric>
#include <string>

#include "featshift/attack.hpp"
#include "featshift/csv.hpp"
#include "featshift/error.hpp"
#include "featshift/parallel.hpp"
#include "featshift/scenario.hpp"
#include "featshift/stream.hpp"

namespace featshift {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Fixed: return "fixed";
    case Family::Unknown: return "unknown";
    case Family::Multi: return "multi";
    case Family::Stream: return "stream";
    case Family::RealData: return "realdata";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "fixed") return Family::Fixed;
  if (name == "unknown") return Family::Unknown;
  if (name == "multi") return Family::Multi;
  if (name == "stream") return Family::Stream;
  if (name == "realdata") return Family::RealData;
  throw ConfigError("unknown experiment family '" + std::string(name) + "'");
}

std::string cell_key(GraphKind graph, double mi) {
  return std::string(to_string(graph)) + "/" + format_double(mi);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_grid(const ExperimentConfig& cfg, bool simulated) {
  if (cfg.seeds.empty()) throw ConfigError("experiment: empty seed grid");
  if (cfg.methods.empty()) throw ConfigError("experiment: empty method grid");
  if (simulated && (cfg.graphs.empty() || cfg.mis.empty())) throw ConfigError("experiment: empty graph or MI grid");
  if (simulated && cfg.replications < 1) throw ConfigError("experiment: replications must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("experiment: alpha must lie in (0, 1)");
  if (cfg.B < 1) throw ConfigError("experiment: B must be >= 1");
}

std::uint64_t scenario_seed(std::uint64_t seed, GraphKind graph) {
  return derive_seed(seed, "scenario/" + std::string(to_string(graph)));
}

enum class Mode { FixedSensor, TwoStage };

// Pooled-null test on one (X, Y) pair. Elapsed covers model fitting plus the
// statistic; for the fixed-sensor mode it is divided by d.
TrialOutcome run_trial(const Matrix& X, const Matrix& Y, const IndexList& target, bool attacked, Method method,
                       Mode mode, std::size_t k, const ExperimentConfig& cfg, std::uint64_t seed) {
  EstimatorConfig est = cfg.estimator;
  est.method = method;
  Rng null_rng(derive_seed(seed, "null"));
  Rng stat_rng(derive_seed(seed, "stats"));
  const NullDistribution null = bootstrap_null_pooled(X, Y, cfg.B, est, null_rng, cfg.pooled_scheme);
  const Thresholds thr = thresholds_from_null(null, cfg.alpha, mode == Mode::TwoStage);

  const auto start = Clock::now();
  FeatureStats stats = compute_stats(X, Y, est, stat_rng);
  double elapsed = seconds_since(start);

  TrialOutcome out;
  out.attack_present = attacked;
  if (attacked) out.truth = target;
  if (mode == Mode::FixedSensor) {
    const auto j = static_cast<Eigen::Index>(target.front());
    out.detected = stats.values(j) > thr.per_feature(j);
    if (out.detected) out.predicted = {target.front()};
    elapsed /= static_cast<double>(X.cols());
  } else {
    DetectionReport rep = decide(std::move(stats), thr, k);
    out.detected = rep.detected;
    out.predicted = std::move(rep.localized);
  }
  out.elapsed = elapsed;
  return out;
}

CellResult summarize(std::vector<TrialOutcome>& outcomes, std::size_t d) {
  CellResult cell;
  cell.trials = outcomes.size();
  for (const auto& o : outcomes) cell.attacked_trials += o.attack_present;
  cell.localization = micro_pr(outcomes, d);
  cell.detection = detection_pr(outcomes);
  double total = 0.0;
  for (const auto& o : outcomes) total += o.elapsed;
  cell.mean_elapsed = outcomes.empty() ? 0.0 : total / static_cast<double>(outcomes.size());
  return cell;
}

ExperimentReport run_simulated(const ExperimentConfig& cfg, Family family, Mode mode,
                               const std::vector<std::size_t>& sizes) {
  require_grid(cfg, true);
  ExperimentReport report;
  report.family = family;
  const std::size_t R = cfg.replications;
  for (std::size_t m : sizes) {
    if (m < 1 || m >= cfg.d) throw ConfigError("experiment: attacked-set size must lie in [1, d)");
    const std::size_t k = cfg.budget_k ? cfg.budget_k : m;
    if (k > cfg.d) throw ConfigError("experiment: budget k exceeds d");
    for (GraphKind graph : cfg.graphs) {
      for (double mi : cfg.mis) {
        const std::string key = cell_key(graph, mi) + "/m" + std::to_string(m);
        std::vector<std::vector<TrialOutcome>> outcomes(cfg.methods.size());
        for (std::uint64_t seed : cfg.seeds) {
          const Scenario sc = make_scenario(graph, cfg.d, mi, scenario_seed(seed, graph), cfg.edge_prob);
          std::vector<std::vector<TrialOutcome>> local(cfg.methods.size(), std::vector<TrialOutcome>(R));
          parallel_for(R, [&](std::size_t r) {
            const std::uint64_t rep_seed = derive_seed(seed, key, r);
            Rng rng(rep_seed);
            const Matrix X = sample_copula(sc.copula, cfg.n, rng);
            Matrix Y = sample_copula(sc.copula, cfg.n, rng);
            const bool attacked = rng.uniform() < cfg.attack_prob;
            const IndexList target = random_subset(cfg.d, m, rng);
            if (attacked) Y = marginal_attack(Y, target, rng).first;
            for (std::size_t mm = 0; mm < cfg.methods.size(); ++mm) {
              const Method method = cfg.methods[mm];
              local[mm][r] = run_trial(X, Y, target, attacked, method, mode, k, cfg,
                                       derive_seed(rep_seed, to_string(method)));
            }
          });
          for (std::size_t mm = 0; mm < cfg.methods.size(); ++mm) {
            outcomes[mm].insert(outcomes[mm].end(), local[mm].begin(), local[mm].end());
          }
        }
        for (std::size_t mm = 0; mm < cfg.methods.size(); ++mm) {
          CellResult cell = summarize(outcomes[mm], cfg.d);
          cell.graph = std::string(to_string(graph));
          cell.mi = mi;
          cell.method = cfg.methods[mm];
          cell.attacked_count = m;
          cell.k = mode == Mode::FixedSensor ? 1 : k;
          cell.null_kind = "pooled";
          report.cells.push_back(std::move(cell));
        }
      }
    }
  }
  return report;
}

}  // namespace

ExperimentReport run_fixed_sensor_experiment(const ExperimentConfig& cfg) {
  return run_simulated(cfg, Family::Fixed, Mode::FixedSensor, {1});
}

ExperimentReport run_unknown_sensor_experiment(const ExperimentConfig& cfg) {
  return run_simulated(cfg, Family::Unknown, Mode::TwoStage, {1});
}

ExperimentReport run_multi_sensor_experiment(const ExperimentConfig& cfg) {
  if (cfg.attacked_sizes.empty()) throw ConfigError("experiment: empty attacked-size grid");
  return run_simulated(cfg, Family::Multi, Mode::TwoStage, cfg.attacked_sizes);
}

ExperimentReport run_stream_experiment(const ExperimentConfig& cfg) {
  require_grid(cfg, true);
  const StreamParams& sp = cfg.stream;
  if (sp.windows.empty()) throw ConfigError("experiment: empty window grid");
  if (sp.streams < 1) throw ConfigError("experiment: streams must be >= 1");
  if (cfg.attacked_sizes.empty()) throw ConfigError("experiment: empty attacked-size grid");
  const auto onset = static_cast<std::size_t>(sp.onset_fraction * static_cast<double>(sp.length));
  if (onset <= sp.clean_len || onset >= sp.length) throw ConfigError("experiment: onset must fall after the clean prefix");

  ExperimentReport report;
  report.family = Family::Stream;
  for (std::size_t m : cfg.attacked_sizes) {
    const std::size_t k = cfg.budget_k ? cfg.budget_k : m;
    for (GraphKind graph : cfg.graphs) {
      for (double mi : cfg.mis) {
        for (std::size_t K : sp.windows) {
          for (Method method : cfg.methods) {
            const std::string key = cell_key(graph, mi) + "/m" + std::to_string(m) + "/K" + std::to_string(K);
            StreamConfig sc;
            sc.window = K;
            sc.step = sp.step;
            sc.test.estimator = cfg.estimator;
            sc.test.estimator.method = method;
            sc.test.B = sp.B;
            sc.test.alpha = cfg.alpha;
            sc.test.k = k;
            sc.test.null_kind = sp.null_kind;
            sc.test.pooled_scheme = cfg.pooled_scheme;

            std::vector<TrialOutcome> steps;
            std::size_t detected_streams = 0;
            std::size_t pre_alarms = 0;
            std::size_t total_streams = 0;
            double delay_sum = 0.0;
            std::size_t delay_count = 0;
            double elapsed = 0.0;
            for (std::uint64_t seed : cfg.seeds) {
              const Scenario scenario = make_scenario(graph, cfg.d, mi, scenario_seed(seed, graph), cfg.edge_prob);
              for (std::size_t s = 0; s < sp.streams; ++s) {
                const std::uint64_t stream_seed = derive_seed(seed, key, s);
                Rng rng(stream_seed);
                const Matrix clean = sample_copula(scenario.copula, sp.length, rng);
                const IndexList target = random_subset(cfg.d, m, rng);
                auto [series, plan] = marginal_attack_from(clean, target, onset, rng);
                Rng run_rng(derive_seed(stream_seed, to_string(method)));
                const auto start = Clock::now();
                const StreamReport sr = run_stream(series, sp.clean_len, sc, plan, run_rng);
                elapsed += seconds_since(start);
                ++total_streams;
                if (sr.t_det_after_onset) {
                  ++detected_streams;
                  delay_sum += static_cast<double>(*sr.delay_after_onset);
                  ++delay_count;
                }
                pre_alarms += sr.pre_onset_alarm;
                for (std::size_t i = 0; i < sr.steps.size(); ++i) {
                  TrialOutcome o;
                  o.attack_present = sr.t_comp && i >= *sr.t_comp;
                  if (o.attack_present) o.truth = plan.attacked;
                  o.detected = sr.steps[i].detected;
                  o.predicted = sr.steps[i].localized;
                  steps.push_back(std::move(o));
                }
              }
            }
            CellResult cell = summarize(steps, cfg.d);
            cell.graph = std::string(to_string(graph));
            cell.mi = mi;
            cell.method = method;
            cell.attacked_count = m;
            cell.k = k;
            cell.window = K;
            cell.null_kind = std::string(to_string(sp.null_kind));
            cell.stream_recall = static_cast<double>(detected_streams) / static_cast<double>(total_streams);
            if (delay_count) cell.mean_delay = delay_sum / static_cast<double>(delay_count);
            cell.pre_onset_alarms = pre_alarms;
            cell.mean_elapsed = elapsed / static_cast<double>(total_streams);
            report.cells.push_back(std::move(cell));
          }
        }
      }
    }
  }
  return report;
}

namespace {

Matrix maybe_difference(const Matrix& m, bool difference) { return difference ? difference_series(m) : m; }

}  // namespace

ExperimentReport run_realdata_experiment(const ExperimentConfig& cfg) {
  require_grid(cfg, false);
  const RealDataParams& rp = cfg.realdata;
  if (rp.csv.empty()) throw ConfigError("experiment: realdata needs a csv path");
  if (rp.null_kinds.empty()) throw ConfigError("experiment: empty null-kind grid");
  if (rp.stride < 1 || rp.half_window < 2) throw ConfigError("experiment: bad realdata window settings");
  const Table table = read_csv(rp.csv);
  const std::size_t d = static_cast<std::size_t>(table.data.cols());
  const std::size_t n = rp.half_window;
  const std::size_t k = cfg.budget_k ? cfg.budget_k : 1;
  if (d < 2) throw InvalidDataError("experiment: realdata needs at least 2 columns");
  if (k > d) throw ConfigError("experiment: budget k exceeds d");

  ExperimentReport report;
  report.family = Family::RealData;
  for (NullKind null_kind : rp.null_kinds) {
    for (Method method : cfg.methods) {
      std::vector<TrialOutcome> outcomes;
      for (std::uint64_t seed : cfg.seeds) {
        Matrix data = table.data;
        if (rp.shuffle) {
          Rng shuffle_rng(derive_seed(seed, "realdata/shuffle"));
          data = gather_rows(data, shuffle_rng.permutation(static_cast<std::size_t>(data.rows())));
        }
        const auto N = static_cast<std::size_t>(data.rows());
        std::size_t region_start = 0;
        if (null_kind == NullKind::Time) region_start = N / 2;
        const std::size_t region_len = N - region_start;
        if (region_len < 2 * n + rp.stride) throw InsufficientDataError("experiment: series too short for realdata trials");
        const std::size_t trials = (region_len - 2 * n) / rp.stride;

        EstimatorConfig est = cfg.estimator;
        est.method = method;
        const std::string key = "realdata/" + std::string(to_string(null_kind)) + "/" + std::string(to_string(method));

        Preprocessor global;
        Thresholds global_thr;
        if (null_kind == NullKind::Time) {
          const Matrix clean = maybe_difference(slice_rows(data, 0, region_start), rp.preprocess.difference);
          global = Preprocessor::fit(clean, rp.preprocess);
          const std::size_t half = rp.preprocess.difference ? n - 1 : n;
          Rng null_rng(derive_seed(seed, key + "/null"));
          global_thr = thresholds_from_null(bootstrap_null_time(global.apply(clean), half, rp.B_time, est, null_rng),
                                            cfg.alpha, true);
        }

        // Exactly half of the trials (rounded down) are attacked.
        Rng assign_rng(derive_seed(seed, key + "/assign"));
        const IndexList order = assign_rng.permutation(trials);
        std::vector<char> attacked(trials, 0);
        for (std::size_t i = 0; i < trials / 2; ++i) attacked[order[i]] = 1;

        std::vector<TrialOutcome> local(trials);
        parallel_for(trials, [&](std::size_t t) {
          const std::uint64_t trial_seed = derive_seed(seed, key, t);
          Rng rng(trial_seed);
          const std::size_t start = region_start + t * rp.stride;
          Matrix X = slice_rows(data, start, start + n);
          Matrix Y = slice_rows(data, start + n, start + 2 * n);
          IndexList target{rng.index(d)};
          if (attacked[t]) Y = marginal_attack(Y, target, rng).first;
          X = maybe_difference(X, rp.preprocess.difference);
          Y = maybe_difference(Y, rp.preprocess.difference);
          if (null_kind == NullKind::Time && !rp.fit_on_concat) {
            X = global.apply(X);
            Y = global.apply(Y);
          } else {
            const Preprocessor p = Preprocessor::fit(rp.fit_on_concat ? vstack(X, Y) : X, rp.preprocess);
            X = p.apply(X);
            Y = p.apply(Y);
          }
          Thresholds thr = global_thr;
          if (null_kind == NullKind::Pooled) {
            Rng null_rng(derive_seed(trial_seed, "null"));
            thr = thresholds_from_null(bootstrap_null_pooled(X, Y, rp.B_pooled, est, null_rng, cfg.pooled_scheme),
                                       cfg.alpha, true);
          }
          Rng stat_rng(derive_seed(trial_seed, "stats"));
          const auto t0 = Clock::now();
          FeatureStats stats = compute_stats(X, Y, est, stat_rng);
          TrialOutcome o;
          o.elapsed = seconds_since(t0);
          const DetectionReport rep = decide(std::move(stats), thr, k);
          o.attack_present = attacked[t] != 0;
          if (o.attack_present) o.truth = target;
          o.detected = rep.detected;
          o.predicted = rep.localized;
          local[t] = std::move(o);
        });
        outcomes.insert(outcomes.end(), local.begin(), local.end());
      }
      CellResult cell = summarize(outcomes, d);
      cell.graph = rp.csv.filename().string();
      cell.method = method;
      cell.attacked_count = 1;
      cell.k = k;
      cell.window = n;
      cell.null_kind = std::string(to_string(null_kind));
      cell.shuffled = rp.shuffle;
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.family) {
    case Family::Fixed: return run_fixed_sensor_experiment(cfg);
    case Family::Unknown: return run_unknown_sensor_experiment(cfg);
    case Family::Multi: return run_multi_sensor_experiment(cfg);
    case Family::Stream: return run_stream_experiment(cfg);
    case Family::RealData: return run_realdata_experiment(cfg);
  }
  throw ConfigError("experiment: unknown family");
}

}  // namespace featshift
