#include <doctest.h>

#include "esdrl/common/rng.hpp"
#include "esdrl/hybrid/episode.hpp"
#include "esdrl/hybrid/supervisor.hpp"

using namespace esdrl;
using namespace esdrl::hybrid;

namespace {

ddpg::Agent test_agent(std::uint64_t seed = 21) {
  ddpg::Hyperparams hp;
  hp.batch_size = 8;
  hp.replay_capacity = 64;
  Rng init(seed);
  return ddpg::Agent(28, 4, hp, init);
}

sim::ManipEnv push_env(bool fixed_goal = false) {
  sim::WorkspaceSpec ws;
  sim::ResetPolicy rp;
  rp.randomize_goal = !fixed_goal;
  sim::GoalSpec goal = sim::GoalSpec::make_fixed(
      {0.9, 0.9, ws.table_height + ws.block_half_extent});
  return sim::ManipEnv(sim::Task::kPush, ws, sim::FrictionMap::uniform(0.5),
                       goal, rp);
}

}  // namespace

TEST_CASE("update_beta") {
  const Eigen::Vector4d a(0.1, -0.2, 0.3, -0.9);
  SUBCASE("no contact keeps RL mode") {
    HybridState h;
    for (long t = 0; t < 10; ++t) update_beta(h, false, t, a);
    CHECK(h.beta == 1);
    CHECK(h.switch_step == -1);
    CHECK_FALSE(h.es_state.has_value());
  }
  SUBCASE("switches at first contact and records t_c") {
    HybridState h;
    for (long t = 0; t < 7; ++t) update_beta(h, false, t, a);
    update_beta(h, true, 7, a);
    CHECK(h.beta == 0);
    CHECK(h.switch_step == 7);
    REQUIRE(h.es_state.has_value());
    CHECK(h.es_state->frozen_gripper == a[3]);
    CHECK((h.es_state->warm_start - a).norm() == 0.0);
  }
  SUBCASE("contact lost after the switch does not revert") {
    HybridState h;
    update_beta(h, true, 0, a);
    update_beta(h, false, 1, a);
    update_beta(h, false, 2, a);
    CHECK(h.beta == 0);
    // history non-increasing with a single 1 -> 0 transition
    int flips = 0;
    for (std::size_t i = 1; i < h.mode_history.size(); ++i) {
      CHECK(h.mode_history[i] <= h.mode_history[i - 1]);
      flips += h.mode_history[i] != h.mode_history[i - 1];
    }
    CHECK(flips <= 1);
  }
}

TEST_CASE("hybrid_action selects exactly one input") {
  HybridState h;
  const Eigen::Vector4d rl(0.1, 0.2, 0.3, 0.4), es(-0.5, -0.6, -0.7, -0.8);
  CHECK((hybrid_action(h, rl, es) - rl).norm() == 0.0);
  h.beta = 0;
  CHECK((hybrid_action(h, rl, es) - es).norm() == 0.0);
}

TEST_CASE("rl_only episode equals a supervisor-free rollout") {
  ddpg::Agent agent = test_agent();
  sim::ManipEnv env = push_env(true);
  Rng r(3);
  env.reset(r);
  sim::ManipEnv mirror = env;  // value semantics: identical copy

  EpisodeOptions opt;
  opt.mode = Mode::kRlOnly;
  opt.horizon = 40;
  opt.stop_on_success = false;
  EpisodeLog log = run_episode(env, agent, opt);

  for (const auto& rec : log.records) {
    const Eigen::Vector4d a = agent.act(mirror.rl_state());
    CHECK((rec.action - a).norm() == 0.0);
    CHECK(rec.beta == 1);
    mirror.step(a);
  }
  CHECK(log.summary.switch_step == -1);
}

TEST_CASE("hybrid episode invariants on a contact-primed start") {
  ddpg::Agent agent = test_agent(22);
  sim::ManipEnv env = push_env(true);
  Rng r(4);
  env.reset(r);
  // Park the ee touching the block so the switch happens at t = 0..1.
  const auto& ws = env.workspace();
  const Eigen::Vector3d obj = env.state().obj_pos;
  env.set_ee_position({obj.x() - ws.block_half_extent, obj.y(),
                       ws.table_height + ws.block_half_extent});
  sim::ManipEnv mirror = env;

  EpisodeOptions opt;
  opt.mode = Mode::kHybrid;
  opt.horizon = 60;
  opt.stop_on_success = false;
  EpisodeLog log = run_episode(env, agent, opt);

  REQUIRE(log.summary.switch_step >= 0);
  const long tc = log.summary.switch_step;

  // beta non-increasing, single switch.
  for (std::size_t i = 1; i < log.records.size(); ++i) {
    CHECK(log.records[i].beta <= log.records[i - 1].beta);
  }
  // Pre-switch actions equal the frozen actor's, bit for bit; post-switch
  // gripper channel equals the actor's channel 4 at t_c.
  double frozen = 0.0;
  for (const auto& rec : log.records) {
    const Eigen::Vector4d a_rl = agent.act(mirror.rl_state());
    if (rec.t < tc) {
      CHECK((rec.action - a_rl).norm() == 0.0);
    } else if (rec.t == tc) {
      frozen = a_rl[3];
    }
    if (rec.t >= tc) {
      CHECK(rec.action[3] == frozen);
    }
    mirror.step(rec.action);
  }
}

TEST_CASE("es_only runs ES from step 0 with a zero warm start") {
  ddpg::Agent agent = test_agent(23);
  sim::ManipEnv env = push_env(true);
  Rng r(5);
  env.reset(r);

  EpisodeOptions opt;
  opt.mode = Mode::kEsOnly;
  opt.horizon = 30;
  opt.stop_on_success = false;
  EpisodeLog log = run_episode(env, agent, opt);

  CHECK(log.summary.switch_step == 0);
  for (const auto& rec : log.records) {
    CHECK(rec.beta == 0);
    CHECK(rec.action[3] == 0.0);  // frozen zero gripper command
  }
}

TEST_CASE("episode summary recomputes from the records") {
  ddpg::Agent agent = test_agent(24);
  sim::ManipEnv env = push_env(true);
  Rng r(6);
  env.reset(r);
  EpisodeOptions opt;
  opt.mode = Mode::kRlOnly;
  opt.horizon = 50;
  opt.stop_on_success = false;
  EpisodeLog log = run_episode(env, agent, opt);

  bool any = false;
  double sum = 0.0;
  for (const auto& rec : log.records) {
    any = any || rec.success;
    sum += rec.d2;
  }
  CHECK(log.summary.success == any);
  CHECK(log.summary.mean_tracking_error ==
        doctest::Approx(sum / log.records.size()).epsilon(1e-15));
  CHECK(log.summary.final_d2 == log.records.back().d2);
}

TEST_CASE("moving-goal summary uses the final-quarter criterion") {
  ddpg::Agent agent = test_agent(25);
  sim::WorkspaceSpec ws;
  sim::ResetPolicy rp;
  rp.randomize_goal = false;
  sim::GoalSpec goal = sim::GoalSpec::make_circular(0.9, 0.9, 0.05, 200,
                                                    ws.table_height);
  sim::ManipEnv env(sim::Task::kPush, ws, sim::FrictionMap::uniform(0.5), goal,
                    rp);
  Rng r(7);
  env.reset(r);
  EpisodeOptions opt;
  opt.mode = Mode::kRlOnly;
  opt.horizon = 80;
  EpisodeLog log = run_episode(env, agent, opt);
  CHECK(log.summary.steps == 80);  // tracking episodes never stop early
  const double delta = ws.success_radius;
  CHECK(log.summary.success ==
        (log.summary.final_quarter_mean_d2 <= 2.0 * delta));
}
