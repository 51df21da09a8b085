#include "featshift/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "featshift/error.hpp"

namespace featshift {

std::string_view to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::Complete: return "complete";
    case GraphKind::Cycle: return "cycle";
    case GraphKind::Grid: return "grid";
    case GraphKind::Random: return "random";
    case GraphKind::Chain: return "chain";
  }
  return "unknown";
}

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "complete") return GraphKind::Complete;
  if (name == "cycle") return GraphKind::Cycle;
  if (name == "grid") return GraphKind::Grid;
  if (name == "random") return GraphKind::Random;
  if (name == "chain") return GraphKind::Chain;
  throw ConfigError("unknown graph '" + std::string(name) + "'");
}

GraphSpec build_graph(GraphKind kind, std::size_t d, double edge_prob, Rng& rng) {
  if (d < 2) throw InvalidArgumentError("build_graph: d must be >= 2");
  GraphSpec g;
  g.kind = kind;
  g.d = d;
  auto& e = g.edges;
  switch (kind) {
    case GraphKind::Complete:
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) e.emplace_back(i, j);
      break;
    case GraphKind::Chain:
      for (std::size_t i = 0; i + 1 < d; ++i) e.emplace_back(i, i + 1);
      break;
    case GraphKind::Cycle:
      for (std::size_t i = 0; i + 1 < d; ++i) e.emplace_back(i, i + 1);
      // A 2-node ring is a single edge.
      if (d > 2) e.emplace_back(0, d - 1);
      std::sort(e.begin(), e.end());
      break;
    case GraphKind::Grid: {
      const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(d))));
      if (side * side != d) throw InvalidArgumentError("build_graph: grid needs a perfect-square d");
      for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
          const std::size_t v = r * side + c;
          if (c + 1 < side) e.emplace_back(v, v + 1);
          if (r + 1 < side) e.emplace_back(v, v + side);
        }
      }
      std::sort(e.begin(), e.end());
      break;
    }
    case GraphKind::Random:
      if (!(edge_prob > 0.0 && edge_prob < 1.0)) {
        throw InvalidArgumentError("build_graph: edge_prob must lie in (0, 1)");
      }
      g.edge_prob = edge_prob;
      do {
        e.clear();
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = i + 1; j < d; ++j)
            if (rng.uniform() < edge_prob) e.emplace_back(i, j);
      } while (e.empty());
      break;
  }
  return g;
}

Matrix adjacency(const GraphSpec& g) {
  const auto d = static_cast<Eigen::Index>(g.d);
  Matrix a = Matrix::Zero(d, d);
  for (const auto& [i, j] : g.edges) {
    a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
    a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
  }
  return a;
}

std::size_t degree(const GraphSpec& g, std::size_t node) {
  std::size_t count = 0;
  for (const auto& [i, j] : g.edges) count += (i == node || j == node);
  return count;
}

}  // namespace featshift
