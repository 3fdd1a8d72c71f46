#include <doctest.h>

#include <cmath>

#include "esdrl/common/rng.hpp"
#include "esdrl/ddpg/agent.hpp"
#include "esdrl/ddpg/replay.hpp"
#include "esdrl/ddpg/train.hpp"
#include "esdrl/net/mlp.hpp"
#include "esdrl/sim/env.hpp"

using namespace esdrl;
using namespace esdrl::ddpg;

namespace {

Hyperparams small_hp() {
  Hyperparams hp;
  hp.batch_size = 8;
  hp.replay_capacity = 512;
  hp.warmup_transitions = 16;
  hp.episode_horizon = 10;
  return hp;
}

Eigen::VectorXd rand_vec(int n, Rng& rng, double scale = 0.5) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform(-scale, scale);
  return v;
}

Batch random_batch(int n, int state_dim, int action_dim, Rng& rng) {
  Batch b;
  b.states.resize(n, state_dim);
  b.actions.resize(n, action_dim);
  b.next_states.resize(n, state_dim);
  b.rewards.resize(n);
  b.terminals.resize(n);
  for (int i = 0; i < n; ++i) {
    b.states.row(i) = rand_vec(state_dim, rng).transpose();
    b.actions.row(i) = rand_vec(action_dim, rng).transpose();
    b.next_states.row(i) = rand_vec(state_dim, rng).transpose();
    b.rewards(i) = rng.uniform(-1.0, 1.0);
    b.terminals(i) = rng.uniform() < 0.3 ? 1.0 : 0.0;
  }
  return b;
}

}  // namespace

TEST_CASE("replay ring keeps exactly the most recent transitions") {
  ReplayBuffer buf(100, 2, 1);
  for (int i = 0; i < 350; ++i) {
    Transition t;
    t.state = Eigen::Vector2d(i, i);
    t.action = Eigen::VectorXd::Constant(1, i);
    t.reward = i;
    t.next_state = Eigen::Vector2d(i + 1, i + 1);
    t.terminal = false;
    buf.push(t);
  }
  CHECK(buf.size() == 100);
  for (int back = 0; back < 100; ++back) {
    CHECK(buf.at_recent(back).reward == doctest::Approx(349 - back));
  }
}

TEST_CASE("select_action") {
  Rng init(1);
  Agent agent(28, 4, small_hp(), init);
  Rng rng(2);
  Eigen::VectorXd s = rand_vec(28, rng);

  SUBCASE("zero noise reproduces the deterministic policy") {
    Eigen::VectorXd a = agent.select_action(s, 0.0, rng);
    CHECK((a - agent.act(s)).norm() == 0.0);
  }

  SUBCASE("noise std 0.1 matches the sample variance over 1e4 draws") {
    const Eigen::VectorXd mu = agent.act(s);
    const int n = 10000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd a = agent.select_action(s, 0.1, rng);
      // Channel 0 stays well inside the box here, so no clipping bias.
      const double d = a[0] - mu[0];
      sum += d;
      sumsq += d * d;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 0.005);
    CHECK(var == doctest::Approx(0.01).epsilon(0.06));
  }

  SUBCASE("large noise is clipped to the box") {
    for (int i = 0; i < 200; ++i) {
      Eigen::VectorXd a = agent.select_action(s, 5.0, rng);
      CHECK((a.array() <= 1.0).all());
      CHECK((a.array() >= -1.0).all());
      CHECK((a.array().abs() == 1.0).any());
    }
  }
}

TEST_CASE("critic_target") {
  Rng init(3);
  Agent agent(28, 4, small_hp(), init);
  Rng rng(4);

  SUBCASE("terminal transitions reduce to the reward") {
    Batch b = random_batch(6, 28, 4, rng);
    b.terminals.setOnes();
    CHECK((agent.critic_target(b) - b.rewards).norm() == 0.0);
  }

  SUBCASE("gamma zero reduces to the reward") {
    Hyperparams hp = small_hp();
    hp.gamma = 0.0;
    Rng init2(3);
    Agent a2(28, 4, hp, init2);
    Batch b = random_batch(6, 28, 4, rng);
    b.terminals.setZero();
    CHECK((a2.critic_target(b) - b.rewards).norm() == 0.0);
  }

  SUBCASE("matches the composed target-network forward chain") {
    Batch b = random_batch(1, 28, 4, rng);
    b.terminals.setZero();
    const auto& spec_a = net::MlpSpec::actor();
    const auto& spec_c = net::MlpSpec::critic();
    Eigen::VectorXd next_a = net::mlp_forward(
        spec_a, agent.target_actor_params(), b.next_states.row(0).transpose());
    Eigen::VectorXd sa(32);
    sa << b.next_states.row(0).transpose(), next_a;
    const double q =
        net::mlp_forward(spec_c, agent.target_critic_params(), sa)[0];
    const double expect = b.rewards(0) + agent.hyperparams().gamma * q;
    CHECK(std::abs(agent.critic_target(b)[0] - expect) < 1e-12);
  }

  SUBCASE("pure function of the batch: repeated calls identical") {
    Batch b = random_batch(5, 28, 4, rng);
    Eigen::VectorXd y1 = agent.critic_target(b);
    Eigen::VectorXd y2 = agent.critic_target(b);
    CHECK((y1 - y2).norm() == 0.0);
  }

  SUBCASE("empty batch rejected") {
    Batch b;
    b.states.resize(0, 28);
    CHECK_THROWS_AS(agent.critic_target(b), std::invalid_argument);
  }
}

TEST_CASE("critic_update") {
  Rng init(5);
  Rng rng(6);

  SUBCASE("loss is non-negative and finite") {
    Agent agent(28, 4, small_hp(), init);
    Batch b = random_batch(8, 28, 4, rng);
    const double loss = agent.critic_update(b);
    CHECK(loss >= 0.0);
    CHECK(std::isfinite(loss));
  }

  SUBCASE("zero TD error leaves parameters unchanged") {
    // gamma = 0 and rewards set to the critic's own predictions.
    Hyperparams hp = small_hp();
    hp.gamma = 0.0;
    Agent agent(28, 4, hp, init);
    Batch b = random_batch(8, 28, 4, rng);
    b.terminals.setZero();
    // Rewards must equal the batched forward bit-for-bit: any nonzero
    // gradient, however tiny, becomes an O(lr) Adam step.
    Eigen::MatrixXd sa(b.size(), 32);
    sa << b.states, b.actions;
    b.rewards = net::mlp_forward_batch(net::MlpSpec::critic(),
                                       agent.critic_params(), sa)
                    .col(0);
    const net::MlpParams before = agent.critic_params();
    const double loss = agent.critic_update(b);
    CHECK(loss == doctest::Approx(0.0).epsilon(1e-20));
    CHECK(agent.critic_params().dense[0].weights.isApprox(
        before.dense[0].weights, 0.0));
  }

  SUBCASE("training loss decreases on a repeated batch") {
    Agent agent(28, 4, small_hp(), init);
    Batch b = random_batch(8, 28, 4, rng);
    const double first = agent.critic_update(b);
    double last = first;
    for (int i = 0; i < 200; ++i) last = agent.critic_update(b);
    CHECK(last < first);
  }
}

TEST_CASE("actor_update follows the critic's ascent direction") {
  // Toy check of the deterministic policy gradient chain: with an analytic
  // critic Q(s,a) = -(a - 0.3)^2 the policy mean must converge to 0.3.
  using namespace esdrl::net;
  MlpSpec spec{1, {8}, 1, OutputHead::kTanh};
  Rng rng(7);
  MlpParams actor = init_params(spec, rng);
  AdamState opt = AdamState::init(spec, 3e-3);
  Eigen::MatrixXd s(1, 1);
  s << 0.4;
  for (int i = 0; i < 3000; ++i) {
    ForwardCache cache;
    Eigen::MatrixXd a = mlp_forward_batch(spec, actor, s, &cache);
    Eigen::MatrixXd dq_da(1, 1);
    dq_da(0, 0) = -2.0 * (a(0, 0) - 0.3);  // dQ/da
    GradientSet grads;
    mlp_backward(spec, actor, cache, dq_da, grads);
    for (auto& d : grads.dense) {
      d.weights *= -1.0;
      d.biases *= -1.0;
    }
    for (auto& nl : grads.norm) {
      nl.gain *= -1.0;
      nl.shift *= -1.0;
    }
    adam_step(opt, actor, grads);
  }
  const double mu = mlp_forward(spec, actor, s.row(0).transpose())[0];
  CHECK(mu == doctest::Approx(0.3).epsilon(0.02));
}

TEST_CASE("actor_update raises the batch mean Q against a frozen critic") {
  Rng init(8);
  Agent agent(28, 4, small_hp(), init);
  Rng rng(9);
  Batch b = random_batch(16, 28, 4, rng);
  // Pre-train the critic a little so its action gradient is meaningful.
  for (int i = 0; i < 50; ++i) agent.critic_update(b);

  auto mean_q = [&]() {
    double acc = 0.0;
    for (int i = 0; i < b.size(); ++i) {
      Eigen::VectorXd s = b.states.row(i).transpose();
      acc += agent.critic_value(s, agent.act(s));
    }
    return acc / b.size();
  };
  const net::MlpParams critic_before = agent.critic_params();
  const double before = mean_q();
  double reported = 0.0;
  for (int i = 0; i < 100; ++i) reported = agent.actor_update(b);
  CHECK(mean_q() > before);
  CHECK(std::isfinite(reported));
  // Critic stayed frozen during actor steps.
  CHECK(agent.critic_params().dense[0].weights.isApprox(
      critic_before.dense[0].weights, 0.0));
}

TEST_CASE("polyak_update") {
  Rng init(10);
  Agent agent(28, 4, small_hp(), init);

  SUBCASE("fixed point: targets equal to live networks stay put") {
    const net::MlpParams before = agent.target_actor_params();
    agent.polyak_update();
    CHECK(agent.target_actor_params().dense[0].weights.isApprox(
        before.dense[0].weights, 0.0));
  }

  SUBCASE("exact blend identity and tau = 0.005 arithmetic") {
    Rng rng(11);
    Batch b = random_batch(8, 28, 4, rng);
    agent.critic_update(b);
    agent.actor_update(b);

    const net::MlpParams t_actor = agent.target_actor_params();
    const net::MlpParams l_actor = agent.actor_params();
    agent.polyak_update();
    const double tau = agent.hyperparams().tau;
    CHECK(tau == 0.005);
    double worst = 0.0;
    for (std::size_t l = 0; l < t_actor.dense.size(); ++l) {
      Eigen::MatrixXd expect = tau * l_actor.dense[l].weights +
                               (1.0 - tau) * t_actor.dense[l].weights;
      worst = std::max(
          worst, (agent.target_actor_params().dense[l].weights - expect)
                     .cwiseAbs()
                     .maxCoeff());
    }
    CHECK(worst == 0.0);
  }

  SUBCASE("repeated application converges geometrically to the live net") {
    Rng rng(12);
    Batch b = random_batch(8, 28, 4, rng);
    agent.critic_update(b);
    agent.actor_update(b);
    auto gap = [&]() {
      return (agent.target_actor_params().dense[0].weights -
              agent.actor_params().dense[0].weights)
          .norm();
    };
    const double g0 = gap();
    for (int i = 0; i < 100; ++i) agent.polyak_update();
    const double g100 = gap();
    CHECK(g100 == doctest::Approx(g0 * std::pow(0.995, 100)).epsilon(1e-9));
  }
}

TEST_CASE("agent checkpoint round-trips bit-exactly") {
  Rng init(13);
  Agent agent(28, 4, small_hp(), init);
  Rng rng(14);
  Batch b = random_batch(8, 28, 4, rng);
  agent.critic_update(b);
  agent.actor_update(b);
  agent.polyak_update();

  const std::string text = agent.to_json();
  Agent loaded = Agent::from_json(text);
  CHECK(loaded.to_json() == text);

  Eigen::VectorXd s = rand_vec(28, rng);
  CHECK((agent.act(s) - loaded.act(s)).norm() == 0.0);
}

TEST_CASE("train: zero epochs returns an empty curve and leaves the agent") {
  sim::WorkspaceSpec ws;
  sim::ManipEnv env(sim::Task::kPush, ws, sim::FrictionMap::uniform(0.5),
                    sim::GoalSpec{}, sim::ResetPolicy{});
  Rng init(15);
  Agent agent(28, 4, small_hp(), init);
  const std::string before = agent.to_json();
  Rng rng(16);
  TrainOptions opt;
  opt.epochs = 0;
  const TrainResult result = train(env, agent, rng, opt);
  CHECK(result.curve.empty());
  CHECK(agent.to_json() == before);
}

TEST_CASE("train: fixed seed reproduces the identical curve and agent") {
  auto run = [&]() {
    sim::WorkspaceSpec ws;
    ws.horizon = 10;
    sim::ManipEnv env(sim::Task::kPush, ws, sim::FrictionMap::uniform(0.5),
                      sim::GoalSpec{}, sim::ResetPolicy{});
    Rng init(17);
    Agent agent(28, 4, small_hp(), init);
    Rng rng(18);
    TrainOptions opt;
    opt.epochs = 2;
    opt.episodes_per_epoch = 3;
    const TrainResult r = train(env, agent, rng, opt);
    return std::make_pair(r, agent.to_json());
  };
  auto [r1, a1] = run();
  auto [r2, a2] = run();
  REQUIRE(r1.curve.size() == r2.curve.size());
  CHECK(r1.curve.size() == 2);
  for (std::size_t i = 0; i < r1.curve.size(); ++i) {
    CHECK(r1.curve[i].success_rate == r2.curve[i].success_rate);
    CHECK(r1.curve[i].mean_return == r2.curve[i].mean_return);
  }
  CHECK(a1 == a2);
}
