#pragma once

#include <Eigen/Core>
#include <array>

namespace esdrl::es {

// Bounded extremum-seeking gains. The dithered channels i = 0..2 run at
// pairwise distinct frequencies omega_i = ratios[i] * omega; every emitted
// component is bounded by dt * sqrt(alpha * omega_i) regardless of the cost.
struct EsParams {
  double alpha = 0.8;   // dither amplitude parameter
  double k = 8.0;       // feedback gain on the cost
  double omega = 5.0;   // base frequency, rad per unit time
  double dt = 0.1;      // step size (time units per control step)
  std::array<double, 3> ratios{1.0, 1.75, 2.9};

  void validate() const;  // throws std::invalid_argument
  double amplitude(int channel) const;  // dt * sqrt(alpha * omega_i)
};

// Per-episode controller state, created at handoff.
struct EsState {
  long t = 0;                   // steps since handoff
  double frozen_gripper = 0.0;  // action channel 4, held from handoff
  Eigen::Vector4d warm_start = Eigen::Vector4d::Zero();
};

// Warm start from the RL action at the switch instant. Rejects actions
// outside [-1,1]^4.
EsState es_init(const Eigen::Vector4d& rl_action_at_handoff);

// One bounded-ES action: channels 0..2 dither as
//   a_i = clip(dt * sqrt(alpha*omega_i) * cos(omega_i * (t*dt) + k * J))
// and channel 3 repeats the frozen gripper command. Advances the step
// counter. Throws on non-finite J.
Eigen::Vector4d es_action(const EsParams& params, EsState& state, double cost_j);

}  // namespace esdrl::es
