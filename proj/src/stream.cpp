#include "featshift/stream.hpp"

#include "featshift/error.hpp"
#include "featshift/parallel.hpp"

namespace featshift {

std::size_t stream_step_count(std::size_t T, std::size_t clean_len, std::size_t window, std::size_t step) {
  if (step == 0 || T < clean_len + window) return 0;
  return (T - clean_len - window) / step + 1;
}

namespace {

void validate(const Matrix& series, std::size_t clean_len, const StreamConfig& cfg, StreamReport& report) {
  const auto T = static_cast<std::size_t>(series.rows());
  const std::size_t K = cfg.window;
  if (cfg.step < 1) throw ConfigError("stream: step must be >= 1");
  if (K < 2) throw ConfigError("stream: window must be >= 2");
  if (!(cfg.test.alpha > 0.0 && cfg.test.alpha < 1.0)) throw ConfigError("stream: alpha must lie in (0, 1)");
  if (cfg.test.k < 1 || cfg.test.k > static_cast<std::size_t>(series.cols())) {
    throw ConfigError("stream: budget k must lie in [1, d]");
  }
  if (T < clean_len + 2 * K) throw InsufficientDataError("stream: need T >= clean_len + 2 * window");
  if (clean_len < K) throw InsufficientDataError("stream: clean prefix shorter than the window");
  if (cfg.test.null_kind == NullKind::Time && clean_len < 2 * K) {
    throw InsufficientDataError("stream: time null needs clean_len >= 2 * window");
  }
  if (K < 2 * cfg.step) report.warnings.emplace_back("window is smaller than twice the step");
  if (!all_finite(series)) throw InvalidDataError("stream: non-finite input");
}

}  // namespace

StreamReport run_stream(const Matrix& series, std::size_t clean_len, const StreamConfig& cfg,
                        const std::optional<AttackPlan>& truth, Rng& rng) {
  StreamReport report;
  validate(series, clean_len, cfg, report);

  Matrix data = cfg.preprocess.difference ? difference_series(series) : series;
  std::size_t clean = clean_len;
  std::optional<std::size_t> onset = truth ? truth->onset : std::nullopt;
  if (truth && !onset) throw ConfigError("stream: attack plan has no onset");
  if (cfg.preprocess.difference) {
    clean -= 1;
    if (onset) onset = *onset == 0 ? 0 : *onset - 1;
  }
  report.preprocessor =
      Preprocessor::fit(cfg.fit_on_full_series ? data : slice_rows(data, 0, clean), cfg.preprocess);
  data = report.preprocessor.apply(data);
  report.clean_len = clean;
  report.onset = onset;

  const auto T = static_cast<std::size_t>(data.rows());
  const std::size_t K = cfg.window;
  const std::size_t steps = stream_step_count(T, clean, K, cfg.step);
  const Matrix X = slice_rows(data, 0, K);
  const Matrix clean_rows = slice_rows(data, 0, clean);

  const std::uint64_t base = rng.next_u64();
  const bool per_step_null = cfg.recompute_thresholds && cfg.test.null_kind == NullKind::Pooled;
  if (!per_step_null) {
    Rng null_rng(derive_seed(base, "null"));
    const NullDistribution null =
        cfg.test.null_kind == NullKind::Time
            ? bootstrap_null_time(clean_rows, K, cfg.test.B, cfg.test.estimator, null_rng)
            : bootstrap_null_pooled(X, slice_rows(data, clean - K, clean), cfg.test.B, cfg.test.estimator, null_rng,
                                    cfg.test.pooled_scheme);
    report.thresholds = thresholds_from_null(null, cfg.test.alpha, cfg.test.bonferroni);
  }

  report.steps.resize(steps);
  report.window_starts.resize(steps);
  parallel_for(steps, [&](std::size_t i) {
    const std::size_t start = clean + i * cfg.step;
    const Matrix Y = slice_rows(data, start, start + K);
    Rng step_rng(derive_seed(base, "step", i));
    DetectionReport r;
    if (per_step_null) {
      r = two_stage_test(X, Y, cfg.test, step_rng);
    } else {
      r = decide(compute_stats(X, Y, cfg.test.estimator, step_rng), report.thresholds, cfg.test.k);
    }
    r.window_step = i;
    report.window_starts[i] = start;
    report.steps[i] = std::move(r);
  });

  if (onset) {
    for (std::size_t i = 0; i < steps; ++i) {
      if (report.window_starts[i] + K > *onset) {
        report.t_comp = i;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < steps; ++i) {
    if (!report.steps[i].detected) continue;
    if (!report.t_det) report.t_det = i;
    if (report.t_comp && i >= *report.t_comp) {
      report.t_det_after_onset = i;
      break;
    }
    if (!report.t_comp) break;
  }
  if (report.t_comp && report.t_det) {
    report.delay = static_cast<long>(*report.t_det) - static_cast<long>(*report.t_comp);
    report.pre_onset_alarm = *report.delay < 0;
  }
  if (report.t_comp && report.t_det_after_onset) {
    report.delay_after_onset = static_cast<long>(*report.t_det_after_onset) - static_cast<long>(*report.t_comp);
  }
  return report;
}

}  // namespace featshift
