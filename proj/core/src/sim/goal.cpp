#include <cmath>
#include <stdexcept>

#include "esdrl/sim/types.hpp"

namespace esdrl::sim {

Eigen::Vector3d GoalSpec::at(long t) const {
  switch (kind) {
    case Kind::kFixed:
      return fixed;
    case Kind::kCircular: {
      // Phase reduced mod period so periodicity is exact, not approximate.
      const double phase =
          2.0 * M_PI * static_cast<double>(t % circular.period) /
          static_cast<double>(circular.period);
      return {circular.center_x + circular.radius * std::sin(phase),
              circular.center_y + circular.radius * std::cos(phase),
              circular.z};
    }
    case Kind::kHelix: {
      const double phase_xy =
          2.0 * M_PI * static_cast<double>(t % helix.period_xy) /
          static_cast<double>(helix.period_xy);
      const double phase_z =
          2.0 * M_PI * static_cast<double>(t % helix.period_z) /
          static_cast<double>(helix.period_z);
      return {helix.center_x + helix.radius * std::sin(phase_xy),
              helix.center_y + helix.radius * std::cos(phase_xy),
              helix.z0 + helix.amp_z * std::sin(phase_z)};
    }
  }
  throw std::logic_error("GoalSpec: bad kind");
}

void GoalSpec::validate(const WorkspaceSpec& ws) const {
  const auto planar_ok = [&](double x, double y) {
    return x >= 0 && x <= ws.x_max && y >= 0 && y <= ws.y_max;
  };
  switch (kind) {
    case Kind::kFixed: {
      if (!planar_ok(fixed.x(), fixed.y())) {
        throw std::invalid_argument("goal: fixed goal outside table bounds");
      }
      if (fixed.z() < ws.table_height ||
          fixed.z() > ws.table_height + ws.ee_z_range) {
        throw std::invalid_argument("goal: fixed goal height unreachable");
      }
      return;
    }
    case Kind::kCircular: {
      if (circular.period < 2 || circular.radius <= 0) {
        throw std::invalid_argument("goal: circular period/radius invalid");
      }
      if (!planar_ok(circular.center_x - circular.radius,
                     circular.center_y - circular.radius) ||
          !planar_ok(circular.center_x + circular.radius,
                     circular.center_y + circular.radius)) {
        throw std::invalid_argument("goal: circle leaves table bounds");
      }
      return;
    }
    case Kind::kHelix: {
      if (helix.period_xy < 2 || helix.period_z < 2 || helix.radius <= 0) {
        throw std::invalid_argument("goal: helix periods/radius invalid");
      }
      if (!planar_ok(helix.center_x - helix.radius,
                     helix.center_y - helix.radius) ||
          !planar_ok(helix.center_x + helix.radius,
                     helix.center_y + helix.radius)) {
        throw std::invalid_argument("goal: helix leaves table bounds");
      }
      // The sine's lower half dips below the table; that segment is
      // untrackable for every controller, so only the upward excursion and
      // the base height are constrained.
      if (helix.z0 < ws.table_height ||
          helix.z0 + helix.amp_z > ws.table_height + ws.ee_z_range) {
        throw std::invalid_argument("goal: helix z excursion out of range");
      }
      return;
    }
  }
  throw std::logic_error("GoalSpec: bad kind");
}

GoalSpec GoalSpec::make_fixed(const Eigen::Vector3d& g) {
  GoalSpec s;
  s.kind = Kind::kFixed;
  s.fixed = g;
  return s;
}

GoalSpec GoalSpec::make_circular(double cx, double cy, double radius,
                                 long period, double z) {
  GoalSpec s;
  s.kind = Kind::kCircular;
  s.circular = {cx, cy, radius, period, z};
  return s;
}

GoalSpec GoalSpec::make_helix(double cx, double cy, double radius,
                              long period_xy, double z0, double amp_z,
                              long period_z) {
  GoalSpec s;
  s.kind = Kind::kHelix;
  s.helix = {cx, cy, radius, period_xy, z0, amp_z, period_z};
  return s;
}

}  // namespace esdrl::sim
