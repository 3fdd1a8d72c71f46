#include "esdrl/ddpg/agent.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "esdrl/net/checkpoint.hpp"
#include "src/internal/checkpoint_io.hpp"
#include "src/internal/json_out.hpp"

namespace esdrl::ddpg {

void Hyperparams::validate() const {
  if (gamma < 0.0 || gamma >= 1.0)
    throw std::invalid_argument("hyperparams: gamma must be in [0,1)");
  if (tau <= 0.0 || tau >= 1.0)
    throw std::invalid_argument("hyperparams: tau must be in (0,1)");
  if (actor_lr <= 0.0 || critic_lr <= 0.0)
    throw std::invalid_argument("hyperparams: learning rates must be > 0");
  if (noise_std < 0.0)
    throw std::invalid_argument("hyperparams: noise_std must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("hyperparams: batch_size");
  if (replay_capacity == 0)
    throw std::invalid_argument("hyperparams: replay_capacity");
  if (episode_horizon < 1)
    throw std::invalid_argument("hyperparams: episode_horizon");
}

namespace {

void polyak_blend(net::MlpParams& target, const net::MlpParams& live,
                  double tau) {
  for (std::size_t i = 0; i < target.dense.size(); ++i) {
    target.dense[i].weights =
        tau * live.dense[i].weights + (1.0 - tau) * target.dense[i].weights;
    target.dense[i].biases =
        tau * live.dense[i].biases + (1.0 - tau) * target.dense[i].biases;
  }
  for (std::size_t i = 0; i < target.norm.size(); ++i) {
    target.norm[i].gain =
        tau * live.norm[i].gain + (1.0 - tau) * target.norm[i].gain;
    target.norm[i].shift =
        tau * live.norm[i].shift + (1.0 - tau) * target.norm[i].shift;
  }
}

Eigen::MatrixXd concat_state_action(const Eigen::MatrixXd& states,
                                    const Eigen::MatrixXd& actions) {
  Eigen::MatrixXd sa(states.rows(), states.cols() + actions.cols());
  sa << states, actions;
  return sa;
}

}  // namespace

Agent::Agent(int state_dim, int action_dim, const Hyperparams& hp,
             Rng& init_rng)
    : state_dim_(state_dim),
      action_dim_(action_dim),
      hp_(hp),
      actor_spec_(net::MlpSpec::actor(state_dim, action_dim)),
      critic_spec_(net::MlpSpec::critic(state_dim, action_dim)) {
  hp_.validate();
  actor_ = net::init_params(actor_spec_, init_rng);
  critic_ = net::init_params(critic_spec_, init_rng);
  target_actor_ = actor_;
  target_critic_ = critic_;
  actor_opt_ = net::AdamState::init(actor_spec_, hp_.actor_lr);
  critic_opt_ = net::AdamState::init(critic_spec_, hp_.critic_lr);
}

Eigen::VectorXd Agent::act(const Eigen::VectorXd& state) const {
  return net::mlp_forward(actor_spec_, actor_, state);
}

Eigen::VectorXd Agent::select_action(const Eigen::VectorXd& state,
                                     double noise_std, Rng& rng) const {
  Eigen::VectorXd a = act(state);
  if (noise_std > 0.0) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      a[i] += rng.normal(0.0, noise_std);
    }
  }
  return a.cwiseMax(-1.0).cwiseMin(1.0);
}

Eigen::VectorXd Agent::critic_target(const Batch& batch) const {
  if (batch.size() == 0)
    throw std::invalid_argument("critic_target: empty batch");
  Eigen::MatrixXd next_actions =
      net::mlp_forward_batch(actor_spec_, target_actor_, batch.next_states);
  Eigen::VectorXd next_q =
      net::mlp_forward_batch(critic_spec_, target_critic_,
                             concat_state_action(batch.next_states, next_actions))
          .col(0);
  return batch.rewards.array() +
         hp_.gamma * (1.0 - batch.terminals.array()) * next_q.array();
}

double Agent::critic_value(const Eigen::VectorXd& state,
                           const Eigen::VectorXd& action) const {
  Eigen::VectorXd sa(state.size() + action.size());
  sa << state, action;
  return net::mlp_forward(critic_spec_, critic_, sa)[0];
}

double Agent::critic_update(const Batch& batch) {
  const Eigen::VectorXd targets = critic_target(batch);
  net::ForwardCache cache;
  Eigen::VectorXd q =
      net::mlp_forward_batch(critic_spec_, critic_,
                             concat_state_action(batch.states, batch.actions),
                             &cache)
          .col(0);
  const Eigen::VectorXd err = q - targets;
  const double n = static_cast<double>(batch.size());
  const double loss = err.squaredNorm() / n;
  if (!std::isfinite(loss)) {
    throw net::DivergenceError("critic_update: non-finite TD loss");
  }
  Eigen::MatrixXd upstream = (2.0 / n) * err;
  net::GradientSet grads;
  net::mlp_backward(critic_spec_, critic_, cache, upstream, grads);
  net::adam_step(critic_opt_, critic_, grads);
  return loss;
}

double Agent::actor_update(const Batch& batch) {
  const double n = static_cast<double>(batch.size());

  net::ForwardCache actor_cache;
  Eigen::MatrixXd actions =
      net::mlp_forward_batch(actor_spec_, actor_, batch.states, &actor_cache);

  net::ForwardCache critic_cache;
  Eigen::VectorXd q =
      net::mlp_forward_batch(critic_spec_, critic_,
                             concat_state_action(batch.states, actions),
                             &critic_cache)
          .col(0);
  const double mean_q = q.mean();
  if (!std::isfinite(mean_q)) {
    throw net::DivergenceError("actor_update: non-finite objective");
  }

  // dQ/da through the frozen critic, then through the actor. Adam descends,
  // so the ascent direction is negated.
  Eigen::MatrixXd ones = Eigen::MatrixXd::Constant(batch.size(), 1, 1.0 / n);
  net::GradientSet critic_grads_unused;
  Eigen::MatrixXd d_input = net::mlp_backward(critic_spec_, critic_,
                                              critic_cache, ones,
                                              critic_grads_unused);
  Eigen::MatrixXd dq_da = d_input.rightCols(action_dim_);

  net::GradientSet actor_grads;
  net::mlp_backward(actor_spec_, actor_, actor_cache, dq_da, actor_grads);
  for (auto& d : actor_grads.dense) {
    d.weights *= -1.0;
    d.biases *= -1.0;
  }
  for (auto& nl : actor_grads.norm) {
    nl.gain *= -1.0;
    nl.shift *= -1.0;
  }
  net::adam_step(actor_opt_, actor_, actor_grads);
  return mean_q;
}

void Agent::polyak_update() {
  polyak_blend(target_actor_, actor_, hp_.tau);
  polyak_blend(target_critic_, critic_, hp_.tau);
}

std::string Agent::to_json() const {
  internal::JsonEmitter e;
  e.begin_object();
  e.key("format_version").value(net::kCheckpointVersion);
  e.key("kind").value("esdrl-agent");
  e.key("state_dim").value(state_dim_);
  e.key("action_dim").value(action_dim_);
  e.key("hyperparams").begin_object();
  e.key("gamma").value(hp_.gamma);
  e.key("tau").value(hp_.tau);
  e.key("actor_lr").value(hp_.actor_lr);
  e.key("critic_lr").value(hp_.critic_lr);
  e.key("noise_std").value(hp_.noise_std);
  e.key("batch_size").value(hp_.batch_size);
  e.key("replay_capacity").value(hp_.replay_capacity);
  e.key("warmup_transitions").value(hp_.warmup_transitions);
  e.key("episode_horizon").value(hp_.episode_horizon);
  e.end_object();

  const auto emit_net = [&](const char* key, const net::MlpSpec& spec,
                            const net::MlpParams& params,
                            const net::AdamState* opt) {
    e.key(key).begin_object();
    internal::emit_network_fields(e, spec, params, opt);
    e.end_object();
  };
  emit_net("actor", actor_spec_, actor_, &actor_opt_);
  emit_net("critic", critic_spec_, critic_, &critic_opt_);
  emit_net("target_actor", actor_spec_, target_actor_, nullptr);
  emit_net("target_critic", critic_spec_, target_critic_, nullptr);
  e.end_object();
  return e.take();
}

Agent Agent::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw net::CheckpointError(std::string("not valid JSON: ") + ex.what());
  }
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != net::kCheckpointVersion) {
      throw net::CheckpointError(
          "agent checkpoint format_version " + std::to_string(version) +
          " unsupported (expected " +
          std::to_string(net::kCheckpointVersion) +
          "); re-export with a matching tool version");
    }
    if (doc.at("kind").get<std::string>() != "esdrl-agent") {
      throw net::CheckpointError("not an agent checkpoint");
    }
    Agent a;
    a.state_dim_ = doc.at("state_dim").get<int>();
    a.action_dim_ = doc.at("action_dim").get<int>();
    const auto& h = doc.at("hyperparams");
    a.hp_.gamma = h.at("gamma").get<double>();
    a.hp_.tau = h.at("tau").get<double>();
    a.hp_.actor_lr = h.at("actor_lr").get<double>();
    a.hp_.critic_lr = h.at("critic_lr").get<double>();
    a.hp_.noise_std = h.at("noise_std").get<double>();
    a.hp_.batch_size = h.at("batch_size").get<int>();
    a.hp_.replay_capacity = h.at("replay_capacity").get<std::size_t>();
    a.hp_.warmup_transitions = h.at("warmup_transitions").get<int>();
    a.hp_.episode_horizon = h.at("episode_horizon").get<int>();
    a.hp_.validate();

    const auto load_net = [&](const char* key, net::MlpSpec& spec,
                              net::MlpParams& params, net::AdamState* opt) {
      const auto& block = doc.at(key);
      spec = internal::parse_spec(block.at("spec"));
      params = internal::parse_tensor_list(block.at("tensors"), spec);
      const double norm_eps = block.value("norm_epsilon", 1e-5);
      for (auto& nl : params.norm) nl.epsilon = norm_eps;
      if (opt) *opt = internal::parse_optimizer(block.at("optimizer"), spec);
    };
    load_net("actor", a.actor_spec_, a.actor_, &a.actor_opt_);
    load_net("critic", a.critic_spec_, a.critic_, &a.critic_opt_);
    net::MlpSpec tmp;
    load_net("target_actor", tmp, a.target_actor_, nullptr);
    if (!(tmp == a.actor_spec_))
      throw net::CheckpointError("target actor spec mismatch");
    load_net("target_critic", tmp, a.target_critic_, nullptr);
    if (!(tmp == a.critic_spec_))
      throw net::CheckpointError("target critic spec mismatch");

    if (a.actor_spec_.input_dim != a.state_dim_ ||
        a.actor_spec_.output_dim != a.action_dim_ ||
        a.critic_spec_.input_dim != a.state_dim_ + a.action_dim_) {
      throw net::CheckpointError("architecture inconsistent with dims");
    }
    return a;
  } catch (const nlohmann::json::exception& ex) {
    throw net::CheckpointError(std::string("malformed agent checkpoint: ") +
                               ex.what());
  }
}

}  // namespace esdrl::ddpg
