#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "featshift/attack.hpp"
#include "featshift/decision.hpp"
#include "featshift/preprocess.hpp"

namespace featshift {

struct StreamConfig {
  std::size_t window = 400;
  std::size_t step = 50;
  TestConfig test{.B = 500, .k = 3, .null_kind = NullKind::Time};
  PreprocessFlags preprocess{};
  bool fit_on_full_series = false;    // fit the transform on every row instead of the clean prefix
  bool recompute_thresholds = false;  // pooled null only: rebuild from (X, window) at every step
};

struct StreamReport {
  std::vector<DetectionReport> steps;
  std::vector<std::size_t> window_starts;  // first row of each Y window, in processed coordinates
  Thresholds thresholds;                   // the shared thresholds (empty when recomputed per step)
  Preprocessor preprocessor;
  std::size_t clean_len = 0;               // processed coordinates
  std::optional<std::size_t> onset;        // processed coordinates

  std::optional<std::size_t> t_comp;       // first step whose window holds an attacked row
  std::optional<std::size_t> t_det;        // first detecting step
  std::optional<long> delay;               // t_det - t_comp; negative for a pre-onset alarm
  bool pre_onset_alarm = false;
  std::optional<std::size_t> t_det_after_onset;  // first detecting step at or after t_comp
  std::optional<long> delay_after_onset;

  std::vector<std::string> warnings;
};

/// floor((T - clean_len - K) / step) + 1.
std::size_t stream_step_count(std::size_t T, std::size_t clean_len, std::size_t window, std::size_t step);

/// X is the first `window` processed rows; Y windows start at clean_len and
/// advance by `step`. `truth.onset` (raw row index) locates the attack.
StreamReport run_stream(const Matrix& series, std::size_t clean_len, const StreamConfig& cfg,
                        const std::optional<AttackPlan>& truth, Rng& rng);

}  // namespace featshift
