#include <benchmark/benchmark.h>

#include "esdrl/common/rng.hpp"
#include "esdrl/ddpg/agent.hpp"
#include "esdrl/es/controller.hpp"
#include "esdrl/net/mlp.hpp"
#include "esdrl/sim/env.hpp"

namespace {

using namespace esdrl;

void BM_ActorForward(benchmark::State& state) {
  net::MlpSpec spec = net::MlpSpec::actor();
  Rng rng(1);
  net::MlpParams params = net::init_params(spec, rng);
  Eigen::VectorXd input = Eigen::VectorXd::Random(28);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net::mlp_forward(spec, params, input));
  }
}
BENCHMARK(BM_ActorForward);

void BM_ForwardBackwardBatch(benchmark::State& state) {
  const int batch = static_cast<int>(state.range(0));
  net::MlpSpec spec = net::MlpSpec::critic();
  Rng rng(2);
  net::MlpParams params = net::init_params(spec, rng);
  Eigen::MatrixXd inputs = Eigen::MatrixXd::Random(batch, spec.input_dim);
  Eigen::MatrixXd upstream = Eigen::MatrixXd::Random(batch, 1);
  for (auto _ : state) {
    net::ForwardCache cache;
    net::mlp_forward_batch(spec, params, inputs, &cache);
    net::GradientSet grads;
    benchmark::DoNotOptimize(
        net::mlp_backward(spec, params, cache, upstream, grads));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_ForwardBackwardBatch)->Arg(64)->Arg(256);

void BM_TrainStep(benchmark::State& state) {
  ddpg::Hyperparams hp;
  hp.batch_size = static_cast<int>(state.range(0));
  hp.replay_capacity = 10000;
  Rng init(3);
  ddpg::Agent agent(28, 4, hp, init);
  ddpg::ReplayBuffer replay(hp.replay_capacity, 28, 4);
  Rng rng(4);
  for (int i = 0; i < 2000; ++i) {
    ddpg::Transition t;
    t.state = Eigen::VectorXd::Random(28);
    t.action = Eigen::VectorXd::Random(4);
    t.reward = rng.uniform(-1, 1);
    t.next_state = Eigen::VectorXd::Random(28);
    t.terminal = false;
    replay.push(t);
  }
  for (auto _ : state) {
    ddpg::Batch b = replay.sample(hp.batch_size, rng);
    agent.critic_update(b);
    agent.actor_update(b);
    agent.polyak_update();
  }
}
BENCHMARK(BM_TrainStep)->Arg(64)->Arg(256);

void BM_EnvStep(benchmark::State& state) {
  sim::WorkspaceSpec ws;
  sim::ManipEnv env(sim::Task::kPush, ws,
                    sim::FrictionMap::three_band(ws), sim::GoalSpec{},
                    sim::ResetPolicy{});
  Rng rng(5);
  env.reset(rng);
  Eigen::Vector4d a(0.3, -0.2, 0.0, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(env.step(a));
  }
}
BENCHMARK(BM_EnvStep);

void BM_EsAction(benchmark::State& state) {
  es::EsParams p;
  es::EsState s = es::es_init(Eigen::Vector4d::Zero());
  double j = 0.42;
  for (auto _ : state) {
    benchmark::DoNotOptimize(es::es_action(p, s, j));
  }
}
BENCHMARK(BM_EsAction);

}  // namespace

BENCHMARK_MAIN();
