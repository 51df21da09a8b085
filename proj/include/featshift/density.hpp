#pragma once

#include <string_view>
#include <variant>

#include "featshift/flow.hpp"
#include "featshift/gaussian.hpp"

namespace featshift {

/// A fitted joint density over R^d.
using DensityModel = std::variant<GaussianModel, FlowModel>;

enum class DensityKind { Gaussian, Flow };

struct DensityOptions {
  DensityKind kind = DensityKind::Gaussian;
  double ridge = 0.0;
  FlowOptions flow{};
};

DensityModel fit_density(const Matrix& data, const DensityOptions& options);

std::size_t density_dim(const DensityModel& model);
double density_log_density(const DensityModel& model, const Vector& x);
Vector density_score(const DensityModel& model, const Vector& x);
/// Score of every row; one pass over the model per row.
Matrix density_scores(const DensityModel& model, const Matrix& points);

std::string_view to_string(DensityKind kind);
DensityKind parse_density_kind(std::string_view name);

}  // namespace featshift
