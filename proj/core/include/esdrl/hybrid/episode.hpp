#pragma once

#include <vector>

#include "esdrl/ddpg/agent.hpp"
#include "esdrl/es/controller.hpp"
#include "esdrl/hybrid/supervisor.hpp"
#include "esdrl/sim/env.hpp"

namespace esdrl::hybrid {

enum class Mode { kRlOnly, kEsOnly, kHybrid };

const char* mode_name(Mode m);

struct StepRecord {
  long t = 0;
  Eigen::Vector3d ee, obj, goal;
  Eigen::Vector4d action;
  int beta = 1;
  double cost_j = 0.0;  // d1 + d2 at the pre-step state (the ES feedback)
  double reward = 0.0;
  bool contact = false;  // pre-step flag, as seen by the supervisor
  bool success = false;
  double d1 = 0.0, d2 = 0.0;  // post-step distances
};

struct EpisodeSummary {
  bool success = false;
  double final_d2 = 0.0;
  double mean_tracking_error = 0.0;      // mean post-step d2
  double final_quarter_mean_d2 = 0.0;
  double total_reward = 0.0;
  long switch_step = -1;
  bool object_out = false;
  long steps = 0;
};

struct EpisodeLog {
  std::vector<StepRecord> records;
  EpisodeSummary summary;
};

struct EpisodeOptions {
  Mode mode = Mode::kHybrid;
  long horizon = 50;
  es::EsParams es{};
  // Fixed-goal episodes stop at the first success (the trajectory has
  // reached its target); tracking episodes always run to the horizon.
  bool stop_on_success = true;
  // Moving-goal success: mean d2 over the final quarter <= factor * delta.
  double moving_success_factor = 2.0;
};

// Runs one evaluation episode on an already-reset environment with the
// frozen actor (noise-free). Hybrid mode switches RL -> ES at first contact;
// es_only runs ES from step 0 with a zero warm start; rl_only never
// switches.
EpisodeLog run_episode(sim::ManipEnv& env, const ddpg::Agent& agent,
                       const EpisodeOptions& options);

}  // namespace esdrl::hybrid
