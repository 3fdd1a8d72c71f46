#include <algorithm>
#include <stdexcept>

#include "esdrl/sim/types.hpp"

namespace esdrl::sim {

void WorkspaceSpec::validate() const {
  if (x_max <= 0 || y_max <= 0 || table_height <= 0 || block_half_extent <= 0 ||
      ee_step_scale <= 0 || horizon < 1 || ee_z_range <= 0 || contact_tol <= 0 ||
      grasp_radius <= 0 || gripper_step <= 0 || success_radius <= 0) {
    throw std::invalid_argument("workspace: all extents must be positive");
  }
  if (2 * block_half_extent >= std::min(x_max, y_max)) {
    throw std::invalid_argument("workspace: block does not fit on the table");
  }
  // The push resolver detects penetration at step endpoints; a step larger
  // than the block diameter could tunnel straight through.
  if (ee_step_scale > 2 * block_half_extent) {
    throw std::invalid_argument(
        "workspace: ee_step_scale must not exceed the block diameter");
  }
}

double FrictionMap::at(double x, double y) const {
  double mu = default_mu;
  for (const auto& p : patches) {
    if (p.contains(x, y)) mu = p.mu;  // last declared wins on overlap
  }
  return mu;
}

double FrictionMap::max_mu() const {
  double mu = default_mu;
  for (const auto& p : patches) mu = std::max(mu, p.mu);
  return mu;
}

void FrictionMap::validate(const WorkspaceSpec& ws) const {
  if (default_mu <= 0 || stiction_scale < 0) {
    throw std::invalid_argument("friction: default_mu must be > 0");
  }
  for (const auto& p : patches) {
    if (p.mu <= 0) throw std::invalid_argument("friction: patch mu must be > 0");
    if (p.x_lo >= p.x_hi || p.y_lo >= p.y_hi) {
      throw std::invalid_argument("friction: degenerate patch rectangle");
    }
    if (p.x_lo < 0 || p.y_lo < 0 || p.x_hi > ws.x_max || p.y_hi > ws.y_max) {
      throw std::invalid_argument("friction: patch outside table bounds");
    }
  }
}

FrictionMap FrictionMap::three_band(const WorkspaceSpec& ws, double mu0,
                                    double mu1, double mu2) {
  FrictionMap m;
  const double third = ws.x_max / 3.0;
  m.patches.push_back({0.0, 0.0, third, ws.y_max, mu0});
  m.patches.push_back({third, 0.0, 2 * third, ws.y_max, mu1});
  m.patches.push_back({2 * third, 0.0, ws.x_max, ws.y_max, mu2});
  return m;
}

FrictionMap FrictionMap::uniform(double mu) {
  FrictionMap m;
  m.default_mu = mu;
  return m;
}

}  // namespace esdrl::sim
