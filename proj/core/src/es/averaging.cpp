#include "esdrl/es/averaging.hpp"

#include <cmath>
#include <stdexcept>

namespace esdrl::es {

namespace {

using Deriv = std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>;

Trajectory integrate_rk4(const Deriv& f, const Eigen::VectorXd& x0,
                         double horizon, double dt, int stride,
                         const char* what) {
  if (dt <= 0 || horizon <= 0 || stride < 1) {
    throw std::invalid_argument("integrate: bad horizon/step");
  }
  const long n_steps = static_cast<long>(std::llround(horizon / dt));
  Trajectory traj;
  traj.times.reserve(n_steps / stride + 2);
  traj.states.reserve(n_steps / stride + 2);
  Eigen::VectorXd x = x0;
  traj.times.push_back(0.0);
  traj.states.push_back(x);
  for (long i = 0; i < n_steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    const Eigen::VectorXd k1 = f(x, t);
    const Eigen::VectorXd k2 = f(x + 0.5 * dt * k1, t + 0.5 * dt);
    const Eigen::VectorXd k3 = f(x + 0.5 * dt * k2, t + 0.5 * dt);
    const Eigen::VectorXd k4 = f(x + dt * k3, t + dt);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) {
      throw std::runtime_error(std::string(what) +
                               ": state went non-finite at t=" +
                               std::to_string(t + dt));
    }
    if ((i + 1) % stride == 0 || i + 1 == n_steps) {
      traj.times.push_back(static_cast<double>(i + 1) * dt);
      traj.states.push_back(x);
    }
  }
  return traj;
}

}  // namespace

Trajectory averaged_flow(const GradientFn& grad_j, double kalpha,
                         const Eigen::VectorXd& x0, double horizon,
                         double dt_ode, int stride) {
  if (kalpha < 0) throw std::invalid_argument("averaged_flow: kalpha < 0");
  auto f = [&](const Eigen::VectorXd& x, double t) -> Eigen::VectorXd {
    Eigen::VectorXd g = grad_j(x, t);
    if (!g.allFinite()) {
      throw std::runtime_error("averaged_flow: non-finite gradient");
    }
    return (-0.5 * kalpha) * g;
  };
  return integrate_rk4(f, x0, horizon, dt_ode, stride, "averaged_flow");
}

Trajectory es_flow(const CostFn& cost, const EsFlowParams& params,
                   const Eigen::VectorXd& x0, double horizon, double dt_ode,
                   int stride, const std::function<double(double)>& noise) {
  if (x0.size() > static_cast<Eigen::Index>(params.ratios.size())) {
    throw std::invalid_argument("es_flow: not enough dither ratios");
  }
  auto f = [&](const Eigen::VectorXd& x, double t) -> Eigen::VectorXd {
    double y = cost(x, t);
    if (noise) y += noise(t);
    if (!std::isfinite(y)) {
      throw std::runtime_error("es_flow: non-finite cost measurement");
    }
    Eigen::VectorXd dx(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double omega_i = params.ratios[i] * params.omega;
      dx[i] = std::sqrt(params.alpha * omega_i) *
              std::cos(omega_i * t + params.k * y);
    }
    return dx;
  };
  return integrate_rk4(f, x0, horizon, dt_ode, stride, "es_flow");
}

double averaging_gap(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("averaging_gap: sample count mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.times[i] != b.times[i]) {
      throw std::invalid_argument("averaging_gap: time grids differ");
    }
    worst = std::max(worst, (a.states[i] - b.states[i]).norm());
  }
  return worst;
}

}  // namespace esdrl::es
