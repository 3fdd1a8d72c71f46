#include "esdrl/harness/commands.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>

#include <json.hpp>

#include "esdrl/es/averaging.hpp"
#include "esdrl/harness/manifest.hpp"
#include "esdrl/net/checkpoint.hpp"
#include "src/internal/csv_out.hpp"
#include "src/internal/json_out.hpp"

namespace esdrl::harness {

namespace {

constexpr std::uint64_t kAgentInitStream = 0x01;
constexpr std::uint64_t kTrainStream = 0x02;
constexpr std::uint64_t kEvalStream = 0x03;

sim::ManipEnv make_env(const ExperimentConfig& cfg, bool for_training) {
  sim::ResetPolicy reset = cfg.reset;
  reset.randomize_goal = for_training ? true : cfg.goal_randomized;
  sim::GoalSpec goal = cfg.goal_randomized
                           ? sim::GoalSpec::make_fixed(
                                 {0.5 * cfg.workspace.x_max,
                                  0.5 * cfg.workspace.y_max,
                                  cfg.workspace.table_height +
                                      cfg.workspace.block_half_extent})
                           : cfg.goal;
  return sim::ManipEnv(cfg.task, cfg.workspace, cfg.friction, goal, reset);
}

}  // namespace

ddpg::Agent load_agent_checkpoint(const std::string& path) {
  return ddpg::Agent::from_json(read_text_file(path));
}

int cmd_train(const ExperimentConfig& cfg, std::uint64_t seed,
              std::ostream& out, TrainOutput* output) {
  try {
    sim::ManipEnv env = make_env(cfg, /*for_training=*/true);
    Rng init_rng = Rng::stream(seed, kAgentInitStream);
    ddpg::Hyperparams hp = cfg.agent;
    hp.episode_horizon = cfg.workspace.horizon;
    ddpg::Agent agent(sim::ManipEnv::kStateDim, sim::ManipEnv::kActionDim, hp,
                      init_rng);

    ddpg::TrainOptions opt;
    opt.epochs = cfg.train.epochs;
    opt.episodes_per_epoch = cfg.train.episodes_per_epoch;
    opt.smoothing = cfg.train.smoothing;
    opt.early_stop_success = cfg.train.early_stop_success;
    opt.on_epoch = [&](const ddpg::EpochRecord& r) {
      out << "epoch " << r.epoch << "  success " << r.success_rate
          << "  smoothed " << r.smoothed_success << "  mean_return "
          << r.mean_return << "\n";
    };

    Rng train_rng = Rng::stream(seed, kTrainStream);
    const ddpg::TrainResult result = ddpg::train(env, agent, train_rng, opt);

    std::filesystem::create_directories(cfg.out_dir);
    const std::string checkpoint = "checkpoint.json";
    const std::string curve = "curve.jsonl";
    write_text_file(
        (std::filesystem::path(cfg.out_dir) / checkpoint).string(),
        agent.to_json() + "\n");

    std::string jsonl;
    for (const auto& r : result.curve) {
      internal::JsonEmitter e;
      e.begin_object();
      e.key("epoch").value(r.epoch);
      e.key("success_rate").value(r.success_rate);
      e.key("smoothed_success_rate").value(r.smoothed_success);
      e.key("mean_return").value(r.mean_return);
      e.end_object();
      jsonl += e.take();
      jsonl += '\n';
    }
    write_text_file((std::filesystem::path(cfg.out_dir) / curve).string(),
                    jsonl);

    RunManifest manifest(cfg.canonical_hash(), {seed});
    manifest.add_artifact(checkpoint);
    manifest.add_artifact(curve);
    {
      internal::JsonEmitter e;
      e.begin_object();
      e.key("epochs_run").value(static_cast<long long>(result.curve.size()));
      e.key("total_env_steps").value(static_cast<long long>(result.total_env_steps));
      e.key("early_stopped").value(result.early_stopped);
      e.key("final_smoothed_success")
          .value(result.curve.empty() ? 0.0
                                      : result.curve.back().smoothed_success);
      e.end_object();
      manifest.add_summary("train", e.take());
    }
    manifest.write(cfg.out_dir);

    if (output) {
      output->checkpoint_path =
          (std::filesystem::path(cfg.out_dir) / checkpoint).string();
      output->curve_path =
          (std::filesystem::path(cfg.out_dir) / curve).string();
      output->result = result;
    }
    return 0;
  } catch (const net::DivergenceError& ex) {
    out << "error: training diverged: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    out << "error: " << ex.what() << "\n";
    return 1;
  }
}

int cmd_eval(const ExperimentConfig& cfg, const std::string& checkpoint_path,
             int episodes, std::uint64_t seed, std::ostream& out) {
  try {
    ddpg::Agent agent = load_agent_checkpoint(checkpoint_path);
    if (agent.state_dim() != sim::ManipEnv::kStateDim ||
        agent.action_dim() != sim::ManipEnv::kActionDim) {
      out << "error: checkpoint architecture does not match the environment ("
          << agent.state_dim() << "/" << agent.action_dim() << ")\n";
      return 1;
    }
    sim::ManipEnv env = make_env(cfg, /*for_training=*/false);

    int successes = 0;
    double final_d2_sum = 0.0;
    double tracking_sum = 0.0;
    for (int ep = 0; ep < episodes; ++ep) {
      Rng reset_rng = Rng::stream(seed + static_cast<std::uint64_t>(ep),
                                  kEvalStream);
      env.reset(reset_rng);
      hybrid::EpisodeOptions opt;
      opt.mode = cfg.mode;
      opt.horizon = cfg.horizon;
      opt.es = cfg.es;
      const hybrid::EpisodeLog log = hybrid::run_episode(env, agent, opt);
      successes += log.summary.success ? 1 : 0;
      final_d2_sum += log.summary.final_d2;
      tracking_sum += log.summary.mean_tracking_error;
    }

    internal::JsonEmitter e;
    e.begin_object();
    e.key("episodes").value(episodes);
    e.key("mode").value(hybrid::mode_name(cfg.mode));
    if (episodes > 0) {
      e.key("success_rate")
          .value(static_cast<double>(successes) / episodes);
      e.key("mean_final_d2").value(final_d2_sum / episodes);
      e.key("mean_tracking_error").value(tracking_sum / episodes);
    } else {
      e.key("success_rate").value(0.0);
      e.key("mean_final_d2").value(0.0);
      e.key("mean_tracking_error").value(0.0);
    }
    e.end_object();
    const std::string metrics = e.take();

    std::filesystem::create_directories(cfg.out_dir);
    write_text_file(
        (std::filesystem::path(cfg.out_dir) / "eval_metrics.json").string(),
        metrics + "\n");
    out << metrics << "\n";

    RunManifest manifest(cfg.canonical_hash(), {seed});
    manifest.add_artifact("eval_metrics.json");
    manifest.add_summary("eval", metrics);
    manifest.write(cfg.out_dir);
    return 0;
  } catch (const std::exception& ex) {
    out << "error: " << ex.what() << "\n";
    return 1;
  }
}

int cmd_scenario(const ExperimentConfig& cfg, const std::string& name,
                 const std::string& checkpoint_path,
                 const std::vector<hybrid::Mode>& modes, std::ostream& out,
                 ScenarioResult* result_out) {
  try {
    ddpg::Agent agent = load_agent_checkpoint(checkpoint_path);
    ScenarioSpec spec = scenario_by_name(name);

    std::filesystem::create_directories(cfg.out_dir);
    std::vector<std::string> artifacts;
    const ScenarioResult result =
        run_scenario(spec, agent, modes, cfg.seeds, cfg.out_dir, &artifacts);

    out << "scenario " << name << " (" << cfg.seeds.size() << " seeds)\n";
    out << "mode          success  track_err  finalq_d2  obj_out\n";
    for (const auto& [mode, agg] : result.aggregates) {
      char line[160];
      std::snprintf(line, sizeof(line), "%-12s  %7.3f  %9.4f  %9.4f  %7.3f\n",
                    mode.c_str(), agg.success_rate, agg.mean_tracking_error,
                    agg.mean_final_quarter_d2, agg.object_out_rate);
      out << line;
    }

    RunManifest manifest(cfg.canonical_hash(), cfg.seeds);
    for (const auto& a : artifacts) manifest.add_artifact(a);
    manifest.add_summary("scenario", scenario_summary_json(result));
    manifest.write(cfg.out_dir);

    if (result_out) *result_out = result;
    return 0;
  } catch (const std::exception& ex) {
    out << "error: " << ex.what() << "\n";
    return 1;
  }
}

int cmd_es_verify(const EsVerifyOptions& options, const std::string& out_dir,
                  std::ostream& out, std::vector<EsVerifyRow>* rows_out) {
  try {
    if (options.omegas.empty()) {
      out << "error: empty omega sweep\n";
      return 1;
    }
    for (std::size_t i = 1; i < options.omegas.size(); ++i) {
      if (options.omegas[i] <= options.omegas[i - 1]) {
        out << "error: omega sweep must be strictly ascending\n";
        return 1;
      }
    }
    std::filesystem::create_directories(out_dir);

    // 2-D quadratic benchmark: J(x) = |x|^2 from x0 = (1,1).
    const auto cost = [](const Eigen::VectorXd& x, double) {
      return x.squaredNorm();
    };
    const auto grad = [](const Eigen::VectorXd& x, double) {
      return (2.0 * x).eval();
    };
    Eigen::VectorXd x0(2);
    x0 << 1.0, 1.0;
    const double kalpha = options.k * options.alpha;
    const int stride = 10;

    const es::Trajectory avg = es::averaged_flow(
        grad, kalpha, x0, options.horizon, options.dt_ode, stride);

    std::vector<std::string> artifacts;
    internal::CsvBuilder report({"omega", "gap"});
    std::vector<EsVerifyRow> rows;
    for (double omega : options.omegas) {
      es::EsFlowParams p;
      p.alpha = options.alpha;
      p.k = options.k;
      p.omega = omega;
      p.ratios = {1.0, 1.75};
      std::function<double(double)> noise;
      if (options.noise_std > 0.0) {
        // Deterministic noise per sample time (hashed), so reruns match.
        noise = [seed = options.noise_seed,
                 std_dev = options.noise_std](double t) {
          Rng r = Rng::stream(seed, static_cast<std::uint64_t>(t * 1e7));
          return r.normal(0.0, std_dev);
        };
      }
      const es::Trajectory esxt = es::es_flow(cost, p, x0, options.horizon,
                                              options.dt_ode, stride, noise);
      const double gap = es::averaging_gap(esxt, avg);
      report.cell(omega).cell(gap).endrow();
      rows.push_back({omega, gap});
      out << "omega " << omega << "  sup-norm gap " << gap << "\n";

      internal::CsvBuilder traj(
          {"t", "es_x1", "es_x2", "avg_x1", "avg_x2", "gap"});
      for (std::size_t i = 0; i < esxt.size(); ++i) {
        traj.cell(esxt.times[i])
            .cell(esxt.states[i][0])
            .cell(esxt.states[i][1])
            .cell(avg.states[i][0])
            .cell(avg.states[i][1])
            .cell((esxt.states[i] - avg.states[i]).norm());
        traj.endrow();
      }
      char fname[64];
      std::snprintf(fname, sizeof(fname), "es_verify_omega%g.csv", omega);
      write_text_file((std::filesystem::path(out_dir) / fname).string(),
                      traj.take());
      artifacts.push_back(fname);
    }

    write_text_file(
        (std::filesystem::path(out_dir) / "es_verify_report.csv").string(),
        report.take());
    artifacts.push_back("es_verify_report.csv");

    RunManifest manifest("es-verify", {options.noise_seed});
    for (const auto& a : artifacts) manifest.add_artifact(a);
    manifest.write(out_dir);

    if (rows_out) *rows_out = rows;
    return 0;
  } catch (const std::exception& ex) {
    out << "error: " << ex.what() << "\n";
    return 1;
  }
}

int cmd_inspect_checkpoint(const std::string& checkpoint_path,
                           std::ostream& out) {
  try {
    const std::string text = read_text_file(checkpoint_path);
    nlohmann::json doc = nlohmann::json::parse(text);
    if (doc.value("kind", "") == "esdrl-agent") {
      ddpg::Agent agent = ddpg::Agent::from_json(text);
      const auto& hp = agent.hyperparams();
      out << "agent checkpoint: state_dim " << agent.state_dim()
          << ", action_dim " << agent.action_dim() << "\n";
      out << "hyperparams: gamma " << hp.gamma << ", tau " << hp.tau
          << ", actor_lr " << hp.actor_lr << ", critic_lr " << hp.critic_lr
          << ", noise_std " << hp.noise_std << ", batch " << hp.batch_size
          << ", replay " << hp.replay_capacity << "\n";
      auto count = [](const net::MlpParams& p) {
        std::size_t n = 0;
        for (const auto& d : p.dense) n += d.weights.size() + d.biases.size();
        for (const auto& nl : p.norm) n += nl.gain.size() + nl.shift.size();
        return n;
      };
      out << "actor parameters: " << count(agent.actor_params())
          << ", critic parameters: " << count(agent.critic_params()) << "\n";
    } else {
      net::LoadedNetwork nw = net::network_from_json(text);
      out << "network checkpoint: " << nw.spec.input_dim << " -> [";
      for (std::size_t i = 0; i < nw.spec.hidden_dims.size(); ++i) {
        out << (i ? "," : "") << nw.spec.hidden_dims[i];
      }
      out << "] -> " << nw.spec.output_dim
          << (nw.spec.output_head == net::OutputHead::kTanh ? " (tanh)"
                                                            : " (linear)")
          << (nw.has_optimizer ? ", with optimizer state" : "") << "\n";
    }
    return 0;
  } catch (const std::exception& ex) {
    out << "error: " << ex.what() << "\n";
    return 1;
  }
}

}  // namespace esdrl::harness
