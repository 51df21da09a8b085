#include "featshift/scenario.hpp"

#include <string>

#include "featshift/error.hpp"

namespace featshift {

namespace {

constexpr std::size_t kMaxGraphAttempts = 1000;

std::size_t default_center(std::size_t d) { return d == 25 ? 12 : d / 2; }

}  // namespace

Scenario make_scenario(GraphKind kind, std::size_t d, double target_mi, std::uint64_t seed, double edge_prob,
                       std::optional<std::size_t> center) {
  ScenarioSpec spec;
  spec.center = center.value_or(default_center(d));
  spec.target_mi = target_mi;
  spec.seed = seed;
  for (std::size_t attempt = 0;; ++attempt) {
    Rng rng(derive_seed(seed, "graph", attempt));
    spec.graph = build_graph(kind, d, edge_prob, rng);
    spec.graph_attempts = attempt + 1;
    try {
      spec.edge_weight = calibrate_edge_weight(spec.graph, spec.center, target_mi);
      break;
    } catch (const UnreachableTargetError&) {
      if (kind != GraphKind::Random || attempt + 1 >= kMaxGraphAttempts) throw;
    }
  }
  return scenario_from_spec(spec);
}

Scenario scenario_from_spec(const ScenarioSpec& spec) {
  Scenario s;
  s.spec = spec;
  Matrix corr = correlation_from_precision(precision_from_graph(spec.graph, spec.edge_weight));
  const std::size_t block[] = {spec.center};
  s.spec.latent_mi = gaussian_mi(corr, block);
  s.copula = make_copula(std::move(corr), spec.edge_weight);
  return s;
}

nlohmann::ordered_json to_json(const AttackPlan& plan) {
  nlohmann::ordered_json j;
  j["attacked"] = plan.attacked;
  j["onset"] = plan.onset ? nlohmann::ordered_json(*plan.onset) : nlohmann::ordered_json(nullptr);
  j["permutation"] = plan.permutation;
  return j;
}

nlohmann::ordered_json to_json(const ScenarioSpec& spec, const std::optional<AttackPlan>& plan) {
  nlohmann::ordered_json j;
  j["schema_version"] = kScenarioSchemaVersion;
  j["graph"] = {{"kind", std::string(to_string(spec.graph.kind))},
                {"d", spec.graph.d},
                {"edge_prob", spec.graph.edge_prob},
                {"edges", spec.graph.edges}};
  j["center"] = spec.center;
  j["target_mi"] = spec.target_mi;
  j["edge_weight"] = spec.edge_weight;
  j["latent_mi"] = spec.latent_mi;
  j["seed"] = spec.seed;
  j["graph_attempts"] = spec.graph_attempts;
  j["attack"] = plan ? to_json(*plan) : nlohmann::ordered_json(nullptr);
  return j;
}

ScenarioSpec scenario_spec_from_json(const nlohmann::ordered_json& j) {
  try {
    if (j.at("schema_version").get<int>() != kScenarioSchemaVersion) {
      throw ConfigError("scenario: unsupported schema_version");
    }
    ScenarioSpec spec;
    const auto& g = j.at("graph");
    spec.graph.kind = parse_graph_kind(g.at("kind").get<std::string>());
    spec.graph.d = g.at("d").get<std::size_t>();
    spec.graph.edge_prob = g.at("edge_prob").get<double>();
    spec.graph.edges = g.at("edges").get<std::vector<std::pair<std::size_t, std::size_t>>>();
    spec.center = j.at("center").get<std::size_t>();
    spec.target_mi = j.at("target_mi").get<double>();
    spec.edge_weight = j.at("edge_weight").get<double>();
    spec.latent_mi = j.at("latent_mi").get<double>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.graph_attempts = j.at("graph_attempts").get<std::size_t>();
    return spec;
  } catch (const nlohmann::ordered_json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

std::optional<AttackPlan> attack_plan_from_json(const nlohmann::ordered_json& j) {
  if (!j.contains("attack") || j.at("attack").is_null()) return std::nullopt;
  try {
    const auto& a = j.at("attack");
    AttackPlan plan;
    plan.attacked = a.at("attacked").get<IndexList>();
    if (!a.at("onset").is_null()) plan.onset = a.at("onset").get<std::size_t>();
    plan.permutation = a.at("permutation").get<IndexList>();
    return plan;
  } catch (const nlohmann::ordered_json::exception& e) {
    throw ConfigError(std::string("scenario attack: ") + e.what());
  }
}

}  // namespace featshift
