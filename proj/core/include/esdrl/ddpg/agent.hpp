#pragma once

#include <string>

#include "esdrl/common/rng.hpp"
#include "esdrl/ddpg/replay.hpp"
#include "esdrl/net/adam.hpp"
#include "esdrl/net/mlp.hpp"

namespace esdrl::ddpg {

struct Hyperparams {
  double gamma = 0.99;          // discount
  double tau = 0.005;           // soft target update
  double actor_lr = 1e-4;
  double critic_lr = 1e-4;
  double noise_std = 0.1;       // exploration, N(0, 0.1)
  int batch_size = 256;
  std::size_t replay_capacity = 1000000;
  int warmup_transitions = 1000;  // updates start once replay holds this many
  int episode_horizon = 50;

  void validate() const;  // throws std::invalid_argument
};

// Goal-conditioned DDPG agent: live actor/critic, Polyak-averaged targets,
// Adam optimizers. All state is value-semantic; copying an Agent clones the
// whole learner.
class Agent {
 public:
  Agent(int state_dim, int action_dim, const Hyperparams& hp, Rng& init_rng);

  int state_dim() const { return state_dim_; }
  int action_dim() const { return action_dim_; }
  const Hyperparams& hyperparams() const { return hp_; }

  // Deterministic policy mu(s); tanh head keeps it inside (-1,1)^4.
  Eigen::VectorXd act(const Eigen::VectorXd& state) const;

  // mu(s) + N(0, noise_std^2), clipped to the action box. noise_std = 0
  // reproduces act() exactly.
  Eigen::VectorXd select_action(const Eigen::VectorXd& state, double noise_std,
                                Rng& rng) const;

  // y_i = r_i + gamma * (1 - d_i) * Q'(s', mu'(s')); target networks only.
  Eigen::VectorXd critic_target(const Batch& batch) const;

  // One Adam step on the critic against held-fixed TD targets; returns the
  // pre-step mean squared error. Throws net::DivergenceError on non-finite
  // loss or gradients.
  double critic_update(const Batch& batch);

  // One ascent step on the actor along the deterministic policy gradient
  // (critic frozen); returns the pre-step mean Q estimate.
  double actor_update(const Batch& batch);

  // theta' <- tau * theta + (1 - tau) * theta' for both target networks.
  void polyak_update();

  const net::MlpParams& actor_params() const { return actor_; }
  const net::MlpParams& target_actor_params() const { return target_actor_; }
  const net::MlpParams& critic_params() const { return critic_; }
  const net::MlpParams& target_critic_params() const { return target_critic_; }
  net::MlpParams& mutable_critic_params() { return critic_; }

  double critic_value(const Eigen::VectorXd& state,
                      const Eigen::VectorXd& action) const;

  // Full-state checkpoint (networks, targets, optimizers, hyperparameters)
  // as a single JSON document; decimal-lossless round trip.
  std::string to_json() const;
  static Agent from_json(std::string_view text);

 private:
  Agent() = default;

  int state_dim_ = 0;
  int action_dim_ = 0;
  Hyperparams hp_;
  net::MlpSpec actor_spec_, critic_spec_;
  net::MlpParams actor_, critic_, target_actor_, target_critic_;
  net::AdamState actor_opt_, critic_opt_;
};

}  // namespace esdrl::ddpg
