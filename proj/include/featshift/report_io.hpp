#pragma once

#include <string>

#include <json.hpp>

#include "featshift/decision.hpp"
#include "featshift/experiments.hpp"
#include "featshift/stream.hpp"

namespace featshift {

using Json = nlohmann::ordered_json;

/// Throws ConfigError naming the first key of `obj` not in `allowed`.
void reject_unknown_keys(const Json& obj, std::initializer_list<std::string_view> allowed, std::string_view where);

Json to_json(const EstimatorConfig& cfg);
/// Starts from `base` and overrides every key present in `j`.
EstimatorConfig estimator_config_from_json(const Json& j, EstimatorConfig base = {});

Json to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const Json& j, ExperimentConfig base = {});

Json to_json(const Thresholds& thr);
Json to_json(const DetectionReport& report);

/// Stream summary without the per-step records.
Json stream_summary_json(const StreamReport& report);
/// One JSON object per line: step, window start, detected, localized, stats, thresholds.
std::string stream_jsonl(const StreamReport& report);

/// Deterministic content only; timings are kept out so reruns compare equal.
Json to_json(const ExperimentReport& report, const ExperimentConfig& cfg);
std::string report_csv(const ExperimentReport& report);
/// Per-cell mean seconds per test.
std::string timing_csv(const ExperimentReport& report);

}  // namespace featshift
