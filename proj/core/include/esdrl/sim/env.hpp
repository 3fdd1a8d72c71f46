#pragma once

#include "esdrl/common/rng.hpp"
#include "esdrl/sim/types.hpp"

namespace esdrl::sim {

// Episode reset randomization. The sampling order at reset is fixed
// (object x, object y, [airborne coin,] goal x, goal y, [goal z], resample
// while the goal is within min_goal_object_gap of the object), so a seed
// fully determines the episode.
struct ResetPolicy {
  bool randomize_object = true;
  double object_region = 0.6;  // central fraction of the table
  bool randomize_goal = true;  // false: follow the configured GoalSpec
  double airborne_prob = 0.5;  // pick task only
  double min_goal_height = 0.05;
  double max_goal_height = 0.45;  // above the table
  double min_goal_object_gap = 0.1;
};

// Desk-scale tabletop: kinematic end-effector, quasi-static block on a
// friction map, goal trajectories, dense reward. Deterministic: a seed and
// an action sequence reproduce the trajectory bit-for-bit.
class ManipEnv {
 public:
  static constexpr int kObsDim = 25;
  static constexpr int kGoalDim = 3;
  static constexpr int kStateDim = kObsDim + kGoalDim;
  static constexpr int kActionDim = 4;

  ManipEnv(Task task, WorkspaceSpec ws, FrictionMap friction, GoalSpec goal,
           ResetPolicy reset_policy = {});

  StepResult reset(Rng& rng);

  // Protocol hooks: override placements after reset (velocities cleared,
  // t stays 0). Used by scenario start poses and tests.
  void set_ee_position(const Eigen::Vector3d& p);
  void set_object_xy(double x, double y);

  StepResult step(const Eigen::Vector4d& action);

  const SimState& state() const { return state_; }
  Task task() const { return task_; }
  const WorkspaceSpec& workspace() const { return ws_; }
  const FrictionMap& friction() const { return friction_; }
  const GoalSpec& goal_spec() const { return goal_; }

  Eigen::Vector3d current_goal() const;
  bool goal_randomized() const { return goal_is_randomized_; }
  bool contact_flag() const;
  Eigen::VectorXd observe() const;   // 25-vector, layout documented in env.cpp
  Eigen::VectorXd rl_state() const;  // observation ++ goal (28)

  double object_rest_z() const {
    return ws_.table_height + ws_.block_half_extent;
  }

 private:
  StepResult make_result() const;

  Task task_;
  WorkspaceSpec ws_;
  FrictionMap friction_;
  GoalSpec goal_;
  ResetPolicy reset_policy_;
  SimState state_;
  Eigen::Vector3d randomized_goal_ = Eigen::Vector3d::Zero();
  bool goal_is_randomized_ = false;
};

}  // namespace esdrl::sim
