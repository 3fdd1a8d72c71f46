#pragma once

#include <functional>
#include <vector>

#include "esdrl/ddpg/agent.hpp"
#include "esdrl/sim/env.hpp"

namespace esdrl::ddpg {

struct EpochRecord {
  int epoch = 0;
  double success_rate = 0.0;
  double smoothed_success = 0.0;  // trailing EMA, weight 0.9 on history
  double mean_return = 0.0;
};

struct TrainResult {
  std::vector<EpochRecord> curve;
  long total_env_steps = 0;
  bool early_stopped = false;
};

struct TrainOptions {
  int epochs = 150;
  int episodes_per_epoch = 100;
  double smoothing = 0.9;
  // Stop once the smoothed success rate reaches this level; < 0 disables.
  double early_stop_success = -1.0;
  std::function<void(const EpochRecord&)> on_epoch;
};

// Goal-randomized episodes with exploration noise; one critic step, one
// actor step and one Polyak step per environment step once the replay
// holds `warmup_transitions`. Success terminates the episode (d = 1); the
// time limit does not mark the transition terminal.
TrainResult train(sim::ManipEnv& env, Agent& agent, Rng& rng,
                  const TrainOptions& options);

}  // namespace esdrl::ddpg
