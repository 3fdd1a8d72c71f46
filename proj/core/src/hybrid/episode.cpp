#include "esdrl/hybrid/episode.hpp"

#include <cmath>
#include <stdexcept>

namespace esdrl::hybrid {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::kRlOnly: return "rl_only";
    case Mode::kEsOnly: return "es_only";
    case Mode::kHybrid: return "hybrid";
  }
  return "?";
}

EpisodeLog run_episode(sim::ManipEnv& env, const ddpg::Agent& agent,
                       const EpisodeOptions& options) {
  if (options.horizon < 1) throw std::invalid_argument("episode horizon < 1");
  options.es.validate();

  const bool moving_goal = !env.goal_randomized() &&
                           env.goal_spec().kind != sim::GoalSpec::Kind::kFixed;
  HybridState h;
  if (options.mode == Mode::kEsOnly) {
    h.beta = 0;
    h.switch_step = 0;
    h.es_state = es::es_init(Eigen::Vector4d::Zero());
  }

  EpisodeLog log;
  log.records.reserve(options.horizon);

  for (long t = 0; t < options.horizon; ++t) {
    const Eigen::Vector3d pre_ee = env.state().ee_pos;
    const Eigen::Vector3d pre_obj = env.state().obj_pos;
    const Eigen::Vector3d pre_goal = env.current_goal();
    const bool contact = env.contact_flag();
    const double j_cost =
        (pre_ee - pre_obj).norm() + (pre_obj - pre_goal).norm();

    Eigen::Vector4d a_rl = Eigen::Vector4d::Zero();
    if (options.mode != Mode::kEsOnly) {
      a_rl = agent.act(env.rl_state());
    }
    if (options.mode == Mode::kHybrid) {
      update_beta(h, contact, t, a_rl);
    } else {
      h.mode_history.push_back(h.beta);
    }

    Eigen::Vector4d a;
    if (h.beta == 0) {
      a = hybrid_action(h, a_rl, es_action(options.es, *h.es_state, j_cost));
    } else {
      a = a_rl;
    }

    const sim::StepResult res = env.step(a);

    StepRecord rec;
    rec.t = t;
    rec.ee = pre_ee;
    rec.obj = pre_obj;
    rec.goal = pre_goal;
    rec.action = a;
    rec.beta = h.beta;
    rec.cost_j = j_cost;
    rec.reward = res.reward;
    rec.contact = contact;
    rec.success = res.success;
    rec.d1 = res.d1;
    rec.d2 = res.d2;
    log.records.push_back(rec);

    if (!moving_goal && options.stop_on_success && res.success) break;
  }

  auto& s = log.summary;
  s.steps = static_cast<long>(log.records.size());
  s.switch_step = h.switch_step;
  s.object_out = env.state().object_out;
  s.final_d2 = log.records.back().d2;
  double sum_d2 = 0.0;
  bool any_success = false;
  for (const auto& r : log.records) {
    sum_d2 += r.d2;
    s.total_reward += r.reward;
    any_success = any_success || r.success;
  }
  s.mean_tracking_error = sum_d2 / static_cast<double>(s.steps);
  const long q_start = s.steps - (s.steps + 3) / 4;
  double q_sum = 0.0;
  for (long i = q_start; i < s.steps; ++i) q_sum += log.records[i].d2;
  s.final_quarter_mean_d2 = q_sum / static_cast<double>(s.steps - q_start);

  if (moving_goal) {
    s.success = s.final_quarter_mean_d2 <=
                options.moving_success_factor * env.workspace().success_radius;
  } else {
    s.success = any_success;
  }
  return log;
}

}  // namespace esdrl::hybrid
