#pragma once

#include <Eigen/Core>
#include <vector>

namespace esdrl::sim {

enum class Task { kPush, kPickPlace };

struct WorkspaceSpec {
  double x_max = 1.0;
  double y_max = 1.0;
  double table_height = 0.45;      // z0
  double block_half_extent = 0.025;
  double ee_step_scale = 0.03;     // meters per unit action component
  int horizon = 50;
  double ee_z_range = 0.5;         // ee z in [z0, z0 + ee_z_range]
  double contact_tol = 0.01;
  double grasp_radius = 0.03;
  double gripper_step = 0.2;       // width change per unit gripper action
  double success_radius = 0.05;    // delta in the reward / success test

  void validate() const;  // throws std::invalid_argument
};

struct FrictionPatch {
  double x_lo = 0.0, y_lo = 0.0, x_hi = 0.0, y_hi = 0.0;
  double mu = 0.0;
  bool contains(double x, double y) const {
    return x >= x_lo && x <= x_hi && y >= y_lo && y <= y_hi;
  }
};

// Axis-aligned kinetic-friction patches over the table. Later patches shadow
// earlier ones where they overlap; uncovered area uses default_mu.
struct FrictionMap {
  double default_mu = 0.5;
  double stiction_scale = 0.004;  // d_stick, meters
  std::vector<FrictionPatch> patches;

  double at(double x, double y) const;
  double max_mu() const;
  void validate(const WorkspaceSpec& ws) const;

  // Three equal vertical bands along +x with the deployment coefficients.
  static FrictionMap three_band(const WorkspaceSpec& ws, double mu0 = 0.8,
                                double mu1 = 1.2, double mu2 = 1.5);
  static FrictionMap uniform(double mu);
};

// Goal trajectory. Fixed, planar circle, or the 3-D helix; `at(t)` is exact
// and periodic components satisfy at(t + period) == at(t) bit-for-bit.
struct GoalSpec {
  enum class Kind { kFixed, kCircular, kHelix };
  Kind kind = Kind::kFixed;

  Eigen::Vector3d fixed = Eigen::Vector3d::Zero();

  struct Circular {
    double center_x = 0.0, center_y = 0.0;
    double radius = 0.0;
    long period = 1;
    double z = 0.0;
  } circular;

  struct Helix {
    double center_x = 0.0, center_y = 0.0;
    double radius = 0.0;
    long period_xy = 1;
    double z0 = 0.0;
    double amp_z = 0.0;
    long period_z = 1;
  } helix;

  Eigen::Vector3d at(long t) const;
  void validate(const WorkspaceSpec& ws) const;

  static GoalSpec make_fixed(const Eigen::Vector3d& g);
  static GoalSpec make_circular(double cx, double cy, double radius,
                                long period, double z);
  static GoalSpec make_helix(double cx, double cy, double radius,
                             long period_xy, double z0, double amp_z,
                             long period_z);
};

struct SimState {
  Eigen::Vector3d ee_pos = Eigen::Vector3d::Zero();
  Eigen::Vector3d ee_vel = Eigen::Vector3d::Zero();
  double gripper_width = 0.0;  // [0,1], both fingers together
  Eigen::Vector3d obj_pos = Eigen::Vector3d::Zero();
  Eigen::Vector3d obj_vel = Eigen::Vector3d::Zero();
  double obj_yaw = 0.0;
  double obj_yaw_rate = 0.0;
  double gripper_vel = 0.0;
  bool grasped = false;
  bool object_out = false;  // block left the table bounds; frozen thereafter
  long t = 0;
};

struct StepResult {
  Eigen::VectorXd observation;  // 25, layout in observe()
  Eigen::Vector3d goal = Eigen::Vector3d::Zero();
  double reward = 0.0;
  bool success = false;
  bool contact = false;
  double d1 = 0.0;  // ee-to-object distance
  double d2 = 0.0;  // object-to-goal distance
  bool object_out = false;
};

struct RewardTerms {
  double reward;
  double d1;
  double d2;
  bool success;
};

// r = -d1 - d2 + 2 * [d2 <= delta]; evaluation order is fixed so the
// decomposition r - ((-d1 - d2) + 2b) == 0 holds exactly in floating point.
RewardTerms compute_reward(const Eigen::Vector3d& ee, const Eigen::Vector3d& obj,
                           const Eigen::Vector3d& goal, double delta);

}  // namespace esdrl::sim
