#include "esdrl/ddpg/train.hpp"

namespace esdrl::ddpg {

TrainResult train(sim::ManipEnv& env, Agent& agent, Rng& rng,
                  const TrainOptions& options) {
  const Hyperparams& hp = agent.hyperparams();
  ReplayBuffer replay(hp.replay_capacity, agent.state_dim(),
                      agent.action_dim());

  TrainResult result;
  double smoothed = 0.0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    int successes = 0;
    double return_sum = 0.0;
    for (int ep = 0; ep < options.episodes_per_epoch; ++ep) {
      env.reset(rng);
      Eigen::VectorXd s = env.rl_state();
      bool episode_success = false;
      double episode_return = 0.0;
      for (int t = 0; t < hp.episode_horizon; ++t) {
        const Eigen::VectorXd a = agent.select_action(s, hp.noise_std, rng);
        const sim::StepResult res = env.step(a);
        const Eigen::VectorXd s_next = env.rl_state();
        episode_return += res.reward;

        Transition tr;
        tr.state = s;
        tr.action = a;
        tr.reward = res.reward;
        tr.next_state = s_next;
        tr.terminal = res.success;  // success only; truncation bootstraps
        replay.push(tr);
        ++result.total_env_steps;

        if (replay.size() >= static_cast<std::size_t>(hp.warmup_transitions)) {
          const Batch batch = replay.sample(hp.batch_size, rng);
          agent.critic_update(batch);
          agent.actor_update(batch);
          agent.polyak_update();
        }

        s = s_next;
        if (res.success) {
          episode_success = true;
          break;
        }
      }
      successes += episode_success ? 1 : 0;
      return_sum += episode_return;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.success_rate = static_cast<double>(successes) /
                       static_cast<double>(options.episodes_per_epoch);
    smoothed = epoch == 0 ? rec.success_rate
                          : options.smoothing * smoothed +
                                (1.0 - options.smoothing) * rec.success_rate;
    rec.smoothed_success = smoothed;
    rec.mean_return =
        return_sum / static_cast<double>(options.episodes_per_epoch);
    result.curve.push_back(rec);
    if (options.on_epoch) options.on_epoch(rec);

    if (options.early_stop_success >= 0.0 &&
        smoothed >= options.early_stop_success) {
      result.early_stopped = true;
      break;
    }
  }
  return result;
}

}  // namespace esdrl::ddpg
