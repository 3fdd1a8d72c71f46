#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "esdrl/es/controller.hpp"

namespace esdrl::es {

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::size_t size() const { return times.size(); }
};

using GradientFn =
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>;
using CostFn = std::function<double(const Eigen::VectorXd&, double)>;

// Integrates the weak-limit averaged dynamics
//   xdot = -(k*alpha/2) * grad_J(x, t)
// with fixed-step RK4; samples every `stride` steps (t = 0 included).
// Throws std::runtime_error if the gradient goes non-finite.
Trajectory averaged_flow(const GradientFn& grad_j, double kalpha,
                         const Eigen::VectorXd& x0, double horizon,
                         double dt_ode, int stride = 1);

// Integrates the continuous bounded-ES law applied directly as the state
// velocity, xdot_i = sqrt(alpha*omega_i) * cos(omega_i t + k J(x,t) + noise),
// with the same RK4 grid. Channel count follows x0's size (<= ratios size).
// Optional measurement noise on J is additive and supplied per sample time.
struct EsFlowParams {
  double alpha = 1.0;
  double k = 1.0;
  double omega = 100.0;
  std::vector<double> ratios = {1.0, 1.75};
};
Trajectory es_flow(const CostFn& cost, const EsFlowParams& params,
                   const Eigen::VectorXd& x0, double horizon, double dt_ode,
                   int stride = 1,
                   const std::function<double(double)>& noise = nullptr);

// Sup-norm gap between two time-aligned trajectories; rejects mismatched
// sampling.
double averaging_gap(const Trajectory& a, const Trajectory& b);

}  // namespace esdrl::es
