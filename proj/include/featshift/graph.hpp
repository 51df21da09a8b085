#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "featshift/numeric.hpp"
#include "featshift/rng.hpp"

namespace featshift {

/// CHAIN is the open path 0-1-...-(d-1); CYCLE closes it into a ring.
enum class GraphKind { Complete, Cycle, Grid, Random, Chain };

std::string_view to_string(GraphKind kind);
GraphKind parse_graph_kind(std::string_view name);

struct GraphSpec {
  GraphKind kind = GraphKind::Complete;
  std::size_t d = 0;
  double edge_prob = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j, lexicographic
};

/// RANDOM graphs are redrawn until at least one edge exists.
GraphSpec build_graph(GraphKind kind, std::size_t d, double edge_prob, Rng& rng);

/// Symmetric 0/1 adjacency matrix.
Matrix adjacency(const GraphSpec& g);

std::size_t degree(const GraphSpec& g, std::size_t node);

}  // namespace featshift
