#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "featshift/numeric.hpp"
#include "featshift/rng.hpp"

namespace featshift {

/// Ground truth for a marginal attack. `permutation[i]` is the source row
/// (relative to `onset`, or 0) written into row i of every attacked column.
struct AttackPlan {
  IndexList attacked;  // sorted
  IndexList permutation;
  std::optional<std::size_t> onset;
};

/// One uniform row permutation shared by every column in `attacked`;
/// the other columns are left as they are.
std::pair<Matrix, AttackPlan> marginal_attack(const Matrix& Y, IndexList attacked, Rng& rng);

/// Same attack restricted to rows [onset, T) of a series.
std::pair<Matrix, AttackPlan> marginal_attack_from(const Matrix& series, IndexList attacked, std::size_t onset,
                                                   Rng& rng);

/// Reapplies a recorded plan.
Matrix apply_attack(const Matrix& data, const AttackPlan& plan);

/// `count` distinct features drawn uniformly from 0..d-1, sorted.
IndexList random_subset(std::size_t d, std::size_t count, Rng& rng);

}  // namespace featshift
