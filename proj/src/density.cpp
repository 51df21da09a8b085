#include "featshift/density.hpp"

#include <string>

#include "featshift/error.hpp"

namespace featshift {

namespace {
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;
}  // namespace

DensityModel fit_density(const Matrix& data, const DensityOptions& options) {
  if (options.kind == DensityKind::Flow) return fit_flow(data, options.flow);
  return fit_gaussian(data, options.ridge);
}

std::size_t density_dim(const DensityModel& model) {
  return std::visit([](const auto& m) { return m.dim(); }, model);
}

double density_log_density(const DensityModel& model, const Vector& x) {
  return std::visit(Overloaded{
                        [&](const GaussianModel& m) { return gaussian_log_density(m, x); },
                        [&](const FlowModel& m) { return flow_log_density(m, x); },
                    },
                    model);
}

Vector density_score(const DensityModel& model, const Vector& x) {
  return std::visit(Overloaded{
                        [&](const GaussianModel& m) { return gaussian_score(m, x); },
                        [&](const FlowModel& m) { return flow_score(m, x); },
                    },
                    model);
}

Matrix density_scores(const DensityModel& model, const Matrix& points) {
  return std::visit(Overloaded{
                        [&](const GaussianModel& m) { return gaussian_scores(m, points); },
                        [&](const FlowModel& m) { return flow_scores(m, points); },
                    },
                    model);
}

std::string_view to_string(DensityKind kind) {
  return kind == DensityKind::Flow ? "flow" : "gaussian";
}

DensityKind parse_density_kind(std::string_view name) {
  if (name == "gaussian") return DensityKind::Gaussian;
  if (name == "flow") return DensityKind::Flow;
  throw ConfigError("unknown density model '" + std::string(name) + "'");
}

}  // namespace featshift
