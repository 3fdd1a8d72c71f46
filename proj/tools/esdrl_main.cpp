// esdrl: train/evaluate the hybrid ES-DRL manipulation controller, run the
// out-of-distribution scenario studies and the averaging verifier.

#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "esdrl/harness/commands.hpp"

namespace {

using esdrl::harness::ExperimentConfig;

struct GlobalOpts {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
  bool paper_scale = false;
};

ExperimentConfig resolve_config(const GlobalOpts& g, esdrl::sim::Task task,
                                bool task_from_cli) {
  ExperimentConfig cfg;
  if (!g.config_path.empty()) {
    cfg = esdrl::harness::load_config_file(g.config_path);
    if (task_from_cli) {
      cfg = [&] {
        // --task overrides the file's task but keeps everything else.
        ExperimentConfig c = cfg;
        c.task = task;
        return c;
      }();
    }
  } else {
    cfg = esdrl::harness::default_config(task);
  }
  if (g.paper_scale) esdrl::harness::apply_paper_scale(cfg);
  if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
  if (g.seed_set) cfg.seeds = {g.seed};
  cfg.validate();
  return cfg;
}

std::vector<esdrl::hybrid::Mode> parse_modes(const std::string& csv) {
  std::vector<esdrl::hybrid::Mode> modes;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "rl_only") {
      modes.push_back(esdrl::hybrid::Mode::kRlOnly);
    } else if (item == "es_only") {
      modes.push_back(esdrl::hybrid::Mode::kEsOnly);
    } else if (item == "hybrid") {
      modes.push_back(esdrl::hybrid::Mode::kHybrid);
    } else {
      throw CLI::ValidationError("--modes",
                                 "expected rl_only|es_only|hybrid list");
    }
  }
  if (modes.empty()) throw CLI::ValidationError("--modes", "empty mode list");
  return modes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid extremum-seeking + DDPG manipulation controller"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOpts g;
  app.add_option("--config", g.config_path, "TOML or JSON experiment config");
  auto* seed_opt = app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--out", g.out_dir, "Output directory");
  app.add_flag("--paper-scale", g.paper_scale,
               "Use the published training scale (replay 1e6, batch 256)");

  std::string task_name = "push";
  bool task_given = false;

  auto* train = app.add_subcommand("train", "Train a DDPG agent");
  train->add_option("--task", task_name, "push|pick_place")
      ->check(CLI::IsMember({"push", "pick_place"}))
      ->each([&](const std::string&) { task_given = true; });

  auto* eval = app.add_subcommand("eval", "Evaluate a trained checkpoint");
  std::string checkpoint;
  int eval_episodes = -1;
  eval->add_option("--checkpoint", checkpoint, "Agent checkpoint path")
      ->required();
  eval->add_option("--episodes", eval_episodes, "Number of episodes");

  auto* scenario = app.add_subcommand(
      "scenario", "Run an out-of-distribution deployment scenario");
  std::string scenario_name;
  std::string modes_csv = "rl_only,es_only,hybrid";
  int seed_count = -1;
  scenario->add_option("--name", scenario_name,
                       "push_friction_fixed|push_friction_moving|pp_track3d")
      ->required();
  scenario->add_option("--checkpoint", checkpoint, "Agent checkpoint path")
      ->required();
  scenario->add_option("--modes", modes_csv, "Comma-separated mode list");
  scenario->add_option("--seed-count", seed_count,
                       "Evaluate seeds 0..N-1 (default 20)");

  auto* verify = app.add_subcommand("es-verify",
                                    "Averaged-dynamics tracking verifier");
  std::vector<double> omegas = {25.0, 50.0, 100.0, 200.0};
  esdrl::harness::EsVerifyOptions vopt;
  verify->add_option("--omegas", omegas, "Ascending dither base frequencies");
  verify->add_option("--k", vopt.k, "Feedback gain");
  verify->add_option("--alpha", vopt.alpha, "Dither amplitude parameter");
  verify->add_option("--horizon", vopt.horizon, "Integration horizon");
  verify->add_option("--dt", vopt.dt_ode, "Integrator step");
  verify->add_option("--noise-std", vopt.noise_std,
                     "Gaussian measurement noise on J");

  auto* inspect = app.add_subcommand("inspect-checkpoint",
                                     "Describe a checkpoint file");
  std::string inspect_path;
  inspect->add_option("path", inspect_path, "Checkpoint path")->required();

  CLI11_PARSE(app, argc, argv);
  g.seed_set = seed_opt->count() > 0;

  try {
    if (*train) {
      auto task = task_name == "pick_place" ? esdrl::sim::Task::kPickPlace
                                            : esdrl::sim::Task::kPush;
      ExperimentConfig cfg = resolve_config(g, task, task_given);
      return esdrl::harness::cmd_train(cfg, cfg.seeds.front(), std::cout);
    }
    if (*eval) {
      ExperimentConfig cfg = resolve_config(g, esdrl::sim::Task::kPush, false);
      const int episodes =
          eval_episodes >= 0 ? eval_episodes : cfg.eval.episodes;
      return esdrl::harness::cmd_eval(cfg, checkpoint, episodes,
                                      cfg.seeds.front(), std::cout);
    }
    if (*scenario) {
      ExperimentConfig cfg = resolve_config(g, esdrl::sim::Task::kPush, false);
      if (seed_count > 0) {
        cfg.seeds.clear();
        for (int i = 0; i < seed_count; ++i) cfg.seeds.push_back(i);
      } else if (!g.seed_set && g.config_path.empty()) {
        cfg.seeds.clear();
        for (int i = 0; i < 20; ++i) cfg.seeds.push_back(i);
      }
      return esdrl::harness::cmd_scenario(cfg, scenario_name, checkpoint,
                                          parse_modes(modes_csv), std::cout);
    }
    if (*verify) {
      vopt.omegas = omegas;
      const std::string out_dir = g.out_dir.empty() ? "out" : g.out_dir;
      return esdrl::harness::cmd_es_verify(vopt, out_dir, std::cout);
    }
    if (*inspect) {
      return esdrl::harness::cmd_inspect_checkpoint(inspect_path, std::cout);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
