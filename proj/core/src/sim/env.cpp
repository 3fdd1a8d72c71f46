#include "esdrl/sim/env.hpp"

#include <cmath>
#include <stdexcept>

namespace esdrl::sim {

RewardTerms compute_reward(const Eigen::Vector3d& ee, const Eigen::Vector3d& obj,
                           const Eigen::Vector3d& goal, double delta) {
  const double d1 = (ee - obj).norm();
  const double d2 = (obj - goal).norm();
  const bool success = d2 <= delta;
  const double base = -d1 - d2;
  const double reward = success ? base + 2.0 : base;
  return {reward, d1, d2, success};
}

ManipEnv::ManipEnv(Task task, WorkspaceSpec ws, FrictionMap friction,
                   GoalSpec goal, ResetPolicy reset_policy)
    : task_(task),
      ws_(ws),
      friction_(std::move(friction)),
      goal_(goal),
      reset_policy_(reset_policy) {
  ws_.validate();
  friction_.validate(ws_);
  if (!reset_policy_.randomize_goal) goal_.validate(ws_);
}

StepResult ManipEnv::reset(Rng& rng) {
  state_ = SimState{};
  state_.ee_pos = {0.5 * ws_.x_max, 0.5 * ws_.y_max,
                   ws_.table_height + 2.0 * ws_.block_half_extent};
  state_.gripper_width = task_ == Task::kPush ? 0.0 : 1.0;

  const double margin = 0.5 * (1.0 - reset_policy_.object_region);
  if (reset_policy_.randomize_object) {
    state_.obj_pos.x() =
        rng.uniform(margin * ws_.x_max, (1.0 - margin) * ws_.x_max);
    state_.obj_pos.y() =
        rng.uniform(margin * ws_.y_max, (1.0 - margin) * ws_.y_max);
  } else {
    state_.obj_pos.x() = 0.5 * ws_.x_max;
    state_.obj_pos.y() = 0.5 * ws_.y_max;
  }
  state_.obj_pos.z() = object_rest_z();

  goal_is_randomized_ = reset_policy_.randomize_goal;
  if (goal_is_randomized_) {
    bool airborne = false;
    if (task_ == Task::kPickPlace) {
      airborne = rng.uniform() < reset_policy_.airborne_prob;
    }
    for (;;) {
      randomized_goal_.x() = rng.uniform(0.0, ws_.x_max);
      randomized_goal_.y() = rng.uniform(0.0, ws_.y_max);
      randomized_goal_.z() =
          airborne ? ws_.table_height + rng.uniform(reset_policy_.min_goal_height,
                                                    reset_policy_.max_goal_height)
                   : object_rest_z();
      const double gap =
          std::hypot(randomized_goal_.x() - state_.obj_pos.x(),
                     randomized_goal_.y() - state_.obj_pos.y());
      if (gap >= reset_policy_.min_goal_object_gap) break;
    }
  }
  return make_result();
}

void ManipEnv::set_ee_position(const Eigen::Vector3d& p) {
  state_.ee_pos.x() = std::clamp(p.x(), 0.0, ws_.x_max);
  state_.ee_pos.y() = std::clamp(p.y(), 0.0, ws_.y_max);
  state_.ee_pos.z() = std::clamp(p.z(), ws_.table_height,
                                 ws_.table_height + ws_.ee_z_range);
  state_.ee_vel.setZero();
}

void ManipEnv::set_object_xy(double x, double y) {
  state_.obj_pos.x() = x;
  state_.obj_pos.y() = y;
  state_.obj_pos.z() = object_rest_z();
  state_.obj_vel.setZero();
}

Eigen::Vector3d ManipEnv::current_goal() const {
  return goal_is_randomized_ ? randomized_goal_ : goal_.at(state_.t);
}

bool ManipEnv::contact_flag() const {
  if (task_ == Task::kPickPlace) return state_.grasped;
  if (state_.object_out) return false;
  const double gap =
      std::hypot(state_.ee_pos.x() - state_.obj_pos.x(),
                 state_.ee_pos.y() - state_.obj_pos.y()) -
      ws_.block_half_extent;
  const double block_top = ws_.table_height + 2.0 * ws_.block_half_extent;
  return gap <= ws_.contact_tol &&
         state_.ee_pos.z() <= block_top + ws_.contact_tol;
}

StepResult ManipEnv::step(const Eigen::Vector4d& action) {
  if (!action.allFinite()) {
    throw std::invalid_argument("step: non-finite action");
  }
  const Eigen::Vector4d a = action.cwiseMax(-1.0).cwiseMin(1.0);

  const Eigen::Vector3d ee_old = state_.ee_pos;
  const Eigen::Vector3d obj_old = state_.obj_pos;
  const double width_old = state_.gripper_width;

  Eigen::Vector3d ee_new = ee_old + ws_.ee_step_scale * a.head<3>();
  ee_new.x() = std::clamp(ee_new.x(), 0.0, ws_.x_max);
  ee_new.y() = std::clamp(ee_new.y(), 0.0, ws_.y_max);
  ee_new.z() = std::clamp(ee_new.z(), ws_.table_height,
                          ws_.table_height + ws_.ee_z_range);

  if (task_ == Task::kPickPlace) {
    state_.gripper_width =
        std::clamp(width_old + ws_.gripper_step * a[3], 0.0, 1.0);
    if (state_.grasped && a[3] > 0.0) {
      // Opening releases; the block settles straight down onto the table.
      state_.grasped = false;
      state_.obj_pos = {state_.obj_pos.x(), state_.obj_pos.y(), object_rest_z()};
    } else if (!state_.grasped && a[3] < 0.0 && !state_.object_out &&
               (ee_new - state_.obj_pos).norm() <= ws_.grasp_radius) {
      state_.grasped = true;
    }
  } else {
    state_.gripper_width = 0.0;  // gripper stays closed for pushing
  }

  if (state_.grasped) {
    state_.obj_pos = ee_new;  // rigid attachment
  } else if (!state_.object_out) {
    // Quasi-static push: if the commanded end-effector pose penetrates the
    // block cylinder, the block yields along the contact normal by the
    // penetration minus the stiction deadband mu * d_stick, and the
    // end-effector is reseated on the block surface.
    const double block_top = ws_.table_height + 2.0 * ws_.block_half_extent;
    const double R = ws_.block_half_extent;
    if (ee_new.z() < block_top &&
        (ee_new.head<2>() - state_.obj_pos.head<2>()).norm() < R) {
      const double radial_pen =
          R - (ee_new.head<2>() - state_.obj_pos.head<2>()).norm();
      const double vertical_escape = block_top - ee_new.z();
      if (ee_old.z() >= block_top && vertical_escape <= radial_pen) {
        ee_new.z() = block_top;  // pressing down on the lid
      } else {
        // Contact normal is radial at the point where the ee path enters
        // the disk (crossing the face, not the endpoint: a step can
        // overshoot the center).
        const Eigen::Vector2d c = state_.obj_pos.head<2>();
        const Eigen::Vector2d p0 = ee_old.head<2>();
        const Eigen::Vector2d p1 = ee_new.head<2>();
        Eigen::Vector2d normal;
        Eigen::Vector2d entry;
        const double rho0 = (p0 - c).norm();
        if (rho0 >= R - 1e-12) {
          const Eigen::Vector2d d = p0 - c;
          const Eigen::Vector2d v = p1 - p0;
          const double a = v.squaredNorm();
          const double b = d.dot(v);
          const double cc = d.squaredNorm() - R * R;
          const double disc = b * b - a * cc;
          double s = 0.0;
          if (a > 1e-18 && disc >= 0.0) {
            s = std::clamp((-b - std::sqrt(disc)) / a, 0.0, 1.0);
          }
          entry = p0 + s * v;
          normal = (c - entry).normalized();
        } else {
          // Already inside (explicitly placed there): radial escape.
          normal = rho0 > 1e-12
                       ? ((c - p0) / rho0).eval()
                       : ((p1 - p0).norm() > 1e-12
                              ? (p1 - p0).normalized().eval()
                              : Eigen::Vector2d(1.0, 0.0).eval());
          entry = c - R * normal;
        }
        const double d_cmd = std::max(0.0, (p1 - entry).dot(normal));
        const double mu = friction_.at(c.x(), c.y());
        const double push =
            std::max(0.0, d_cmd - mu * friction_.stiction_scale);
        state_.obj_pos.head<2>() += push * normal;
        ee_new.head<2>() = state_.obj_pos.head<2>() - R * normal;
      }
    }
    if (state_.obj_pos.x() < 0.0 || state_.obj_pos.x() > ws_.x_max ||
        state_.obj_pos.y() < 0.0 || state_.obj_pos.y() > ws_.y_max) {
      state_.object_out = true;  // off the table; frozen from here on
    }
  }

  state_.ee_pos = ee_new;
  state_.ee_vel = ee_new - ee_old;
  state_.obj_vel = state_.obj_pos - obj_old;
  state_.gripper_vel = state_.gripper_width - width_old;
  state_.t += 1;
  return make_result();
}

// Observation layout (25):
//   [0:3)   ee position
//   [3:6)   object position
//   [6:9)   object - ee displacement
//   [9:11)  finger state, width/2 per finger
//   [11:14) object orientation (yaw, 0, 0) -- planar model
//   [14:17) object linear velocity, per step
//   [17:20) object angular velocity (0, 0, yaw_rate)
//   [20:23) ee linear velocity, per step
//   [23:25) finger velocities
Eigen::VectorXd ManipEnv::observe() const {
  Eigen::VectorXd o(kObsDim);
  o.segment<3>(0) = state_.ee_pos;
  o.segment<3>(3) = state_.obj_pos;
  o.segment<3>(6) = state_.obj_pos - state_.ee_pos;
  o[9] = 0.5 * state_.gripper_width;
  o[10] = 0.5 * state_.gripper_width;
  o[11] = state_.obj_yaw;
  o[12] = 0.0;
  o[13] = 0.0;
  o.segment<3>(14) = state_.obj_vel;
  o[17] = 0.0;
  o[18] = 0.0;
  o[19] = state_.obj_yaw_rate;
  o.segment<3>(20) = state_.ee_vel;
  o[23] = 0.5 * state_.gripper_vel;
  o[24] = 0.5 * state_.gripper_vel;
  return o;
}

Eigen::VectorXd ManipEnv::rl_state() const {
  Eigen::VectorXd s(kStateDim);
  s.head<kObsDim>() = observe();
  s.tail<kGoalDim>() = current_goal();
  return s;
}

StepResult ManipEnv::make_result() const {
  StepResult r;
  r.observation = observe();
  r.goal = current_goal();
  const RewardTerms terms = compute_reward(state_.ee_pos, state_.obj_pos,
                                           r.goal, ws_.success_radius);
  r.reward = terms.reward;
  r.d1 = terms.d1;
  r.d2 = terms.d2;
  r.success = terms.success;
  r.contact = contact_flag();
  r.object_out = state_.object_out;
  return r;
}

}  // namespace esdrl::sim
