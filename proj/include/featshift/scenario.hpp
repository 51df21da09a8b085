#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include <json.hpp>

#include "featshift/attack.hpp"
#include "featshift/copula.hpp"
#include "featshift/graph.hpp"

namespace featshift {

/// Replayable description of a simulated sensor network.
struct ScenarioSpec {
  GraphSpec graph;
  std::size_t center = 12;
  double target_mi = 0.2;
  double edge_weight = 0.0;
  double latent_mi = 0.0;  // center MI of the latent Gaussian at edge_weight
  std::uint64_t seed = 0;
  std::size_t graph_attempts = 1;  // RANDOM graphs drawn before calibration succeeded
};

struct Scenario {
  ScenarioSpec spec;
  CopulaSpec copula;
};

/// Center defaults to node 12 for d = 25 and to d / 2 otherwise. RANDOM
/// graphs are redrawn (derive_seed(seed, "graph", attempt)) until the
/// center's MI target is reachable.
Scenario make_scenario(GraphKind kind, std::size_t d, double target_mi, std::uint64_t seed,
                       double edge_prob = 0.1, std::optional<std::size_t> center = std::nullopt);

/// Rebuilds the copula from a stored scenario without recalibrating.
Scenario scenario_from_spec(const ScenarioSpec& spec);

inline constexpr int kScenarioSchemaVersion = 1;

nlohmann::ordered_json to_json(const ScenarioSpec& spec, const std::optional<AttackPlan>& plan = std::nullopt);
ScenarioSpec scenario_spec_from_json(const nlohmann::ordered_json& j);
std::optional<AttackPlan> attack_plan_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const AttackPlan& plan);

}  // namespace featshift
