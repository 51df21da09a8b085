#include "featshift/attack.hpp"

#include <algorithm>

#include "featshift/error.hpp"

namespace featshift {

namespace {

void check_attacked(const IndexList& attacked, std::size_t d) {
  if (attacked.empty()) throw InvalidArgumentError("marginal_attack: attacked set is empty");
  if (attacked.back() >= d) throw InvalidArgumentError("marginal_attack: attacked index out of range");
}

IndexList normalized(IndexList attacked) {
  std::sort(attacked.begin(), attacked.end());
  attacked.erase(std::unique(attacked.begin(), attacked.end()), attacked.end());
  return attacked;
}

}  // namespace

Matrix apply_attack(const Matrix& data, const AttackPlan& plan) {
  const std::size_t start = plan.onset.value_or(0);
  const auto n = static_cast<std::size_t>(data.rows());
  if (start + plan.permutation.size() != n) throw ShapeError("apply_attack: permutation length mismatch");
  check_attacked(plan.attacked, static_cast<std::size_t>(data.cols()));
  Matrix out = data;
  for (std::size_t i = 0; i < plan.permutation.size(); ++i) {
    const auto dst = static_cast<Eigen::Index>(start + i);
    const auto src = static_cast<Eigen::Index>(start + plan.permutation[i]);
    for (std::size_t j : plan.attacked) out(dst, static_cast<Eigen::Index>(j)) = data(src, static_cast<Eigen::Index>(j));
  }
  return out;
}

std::pair<Matrix, AttackPlan> marginal_attack(const Matrix& Y, IndexList attacked, Rng& rng) {
  AttackPlan plan;
  plan.attacked = normalized(std::move(attacked));
  check_attacked(plan.attacked, static_cast<std::size_t>(Y.cols()));
  plan.permutation = rng.permutation(static_cast<std::size_t>(Y.rows()));
  Matrix out = apply_attack(Y, plan);
  return {std::move(out), std::move(plan)};
}

std::pair<Matrix, AttackPlan> marginal_attack_from(const Matrix& series, IndexList attacked, std::size_t onset,
                                                   Rng& rng) {
  const auto T = static_cast<std::size_t>(series.rows());
  if (onset >= T) throw InvalidArgumentError("marginal_attack_from: onset beyond the series");
  AttackPlan plan;
  plan.attacked = normalized(std::move(attacked));
  check_attacked(plan.attacked, static_cast<std::size_t>(series.cols()));
  plan.onset = onset;
  plan.permutation = rng.permutation(T - onset);
  Matrix out = apply_attack(series, plan);
  return {std::move(out), std::move(plan)};
}

IndexList random_subset(std::size_t d, std::size_t count, Rng& rng) {
  if (count > d) throw InvalidArgumentError("random_subset: count exceeds d");
  IndexList pool(d);
  for (std::size_t i = 0; i < d; ++i) pool[i] = i;
  for (std::size_t i = 0; i < count; ++i) std::swap(pool[i], pool[i + rng.index(d - i)]);
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace featshift
