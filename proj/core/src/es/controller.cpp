#include "esdrl/es/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace esdrl::es {

void EsParams::validate() const {
  if (alpha <= 0 || k <= 0 || omega <= 0 || dt <= 0) {
    throw std::invalid_argument("es params: alpha, k, omega, dt must be > 0");
  }
  auto sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] <= 0) {
      throw std::invalid_argument("es params: ratios must be > 0");
    }
    if (i > 0 && !(sorted[i - 1] < sorted[i])) {
      throw std::invalid_argument(
          "es params: dither ratios must be pairwise distinct");
    }
  }
}

double EsParams::amplitude(int channel) const {
  return dt * std::sqrt(alpha * ratios[channel] * omega);
}

EsState es_init(const Eigen::Vector4d& a) {
  if (!a.allFinite() || (a.array().abs() > 1.0).any()) {
    throw std::invalid_argument("es_init: handoff action outside [-1,1]^4");
  }
  EsState s;
  s.warm_start = a;
  s.frozen_gripper = a[3];
  s.t = 0;
  return s;
}

Eigen::Vector4d es_action(const EsParams& params, EsState& state,
                          double cost_j) {
  if (!std::isfinite(cost_j)) {
    throw std::invalid_argument("es_action: non-finite cost feedback");
  }
  const double tau = static_cast<double>(state.t) * params.dt;
  Eigen::Vector4d a;
  for (int i = 0; i < 3; ++i) {
    const double omega_i = params.ratios[i] * params.omega;
    const double raw = params.dt * std::sqrt(params.alpha * omega_i) *
                       std::cos(omega_i * tau + params.k * cost_j);
    a[i] = std::clamp(raw, -1.0, 1.0);
  }
  a[3] = state.frozen_gripper;
  state.t += 1;
  return a;
}

}  // namespace esdrl::es
