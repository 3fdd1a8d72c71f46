#pragma once

#include <Eigen/Core>
#include <cstddef>

#include "esdrl/common/rng.hpp"

namespace esdrl::ddpg {

struct Transition {
  Eigen::VectorXd state;       // 28
  Eigen::VectorXd action;      // 4
  double reward = 0.0;
  Eigen::VectorXd next_state;  // 28
  bool terminal = false;
};

// Sampled minibatch, rows are transitions.
struct Batch {
  Eigen::MatrixXd states;
  Eigen::MatrixXd actions;
  Eigen::VectorXd rewards;
  Eigen::MatrixXd next_states;
  Eigen::VectorXd terminals;  // 0/1
  Eigen::Index size() const { return states.rows(); }
};

// Fixed-capacity ring; once full the oldest transition is overwritten.
// Storage is struct-of-arrays so sampling is a row gather.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, int state_dim, int action_dim);

  void push(const Transition& t);
  Batch sample(int batch_size, Rng& rng) const;

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }

  // Oldest-first copy of the i-th most recent slot (test support).
  Transition at_recent(std::size_t i_back) const;

 private:
  std::size_t capacity_;
  std::size_t cursor_ = 0;
  std::size_t size_ = 0;
  Eigen::MatrixXd states_, actions_, next_states_;
  Eigen::VectorXd rewards_, terminals_;
};

}  // namespace esdrl::ddpg
