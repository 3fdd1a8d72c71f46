#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "esdrl/es/controller.hpp"

namespace esdrl::hybrid {

// Switching state for one episode. beta starts at 1 (RL mode) and latches to
// 0 (ES mode) at the first contact; it never switches back within an episode.
struct HybridState {
  int beta = 1;
  long switch_step = -1;  // t_c, -1 while still in RL mode
  std::optional<es::EsState> es_state;
  std::vector<int> mode_history;
};

// Applies the switching law: on the first contact, latch beta to 0 and warm
// start the ES controller from the most recent RL action.
void update_beta(HybridState& h, bool contact, long t,
                 const Eigen::Vector4d& last_rl_action);

// a = beta * a_rl + (1 - beta) * a_es; with binary beta this returns one of
// the two inputs bit-for-bit.
Eigen::Vector4d hybrid_action(const HybridState& h, const Eigen::Vector4d& a_rl,
                              const Eigen::Vector4d& a_es);

}  // namespace esdrl::hybrid
