#include "esdrl/harness/scenario.hpp"

#include <filesystem>

#include "esdrl/harness/manifest.hpp"
#include "src/internal/csv_out.hpp"
#include "src/internal/json_out.hpp"

namespace esdrl::harness {

namespace {

constexpr std::uint64_t kResetStream = 0xE5;

es::EsParams deployment_es() {
  // Sized for the moving-goal scenarios: averaged drift (k*alpha/2)*scale^2*dt
  // must outrun the goal (~1.6 mm/step) while the per-channel position dither
  // scale*sqrt(alpha/omega_i) stays near a centimeter.
  es::EsParams p;
  p.alpha = 0.96;
  p.k = 60.0;
  p.omega = 6.0;
  p.dt = 0.1;
  p.ratios = {1.0, 1.75, 2.9};
  return p;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"push_friction_fixed", "push_friction_moving", "pp_track3d"};
}

ScenarioSpec scenario_by_name(const std::string& name) {
  ScenarioSpec s;
  s.name = name;
  s.es = deployment_es();
  const double z0 = s.workspace.table_height;
  const double rest_z = z0 + s.workspace.block_half_extent;
  if (name == "push_friction_fixed") {
    s.task = sim::Task::kPush;
    s.friction = sim::FrictionMap::three_band(s.workspace);
    s.goal = sim::GoalSpec::make_fixed(
        {0.9 * s.workspace.x_max, 0.9 * s.workspace.y_max, rest_z});
    s.horizon = 2500;
    s.stop_on_success = true;
  } else if (name == "push_friction_moving") {
    s.task = sim::Task::kPush;
    s.friction = sim::FrictionMap::three_band(s.workspace);
    s.goal = sim::GoalSpec::make_circular(0.9 * s.workspace.x_max,
                                          0.9 * s.workspace.y_max, 0.05, 200,
                                          z0);
    s.horizon = 1600;
    s.stop_on_success = false;
  } else if (name == "pp_track3d") {
    s.task = sim::Task::kPickPlace;
    s.friction = sim::FrictionMap::uniform(0.5);
    s.goal = sim::GoalSpec::make_helix(0.75 * s.workspace.x_max,
                                       0.75 * s.workspace.y_max, 0.15, 500, z0,
                                       0.20, 4000);
    s.horizon = 4000;
    s.stop_on_success = false;
  } else {
    throw ConfigError("unknown scenario '" + name +
                      "' (expected push_friction_fixed, push_friction_moving "
                      "or pp_track3d)");
  }
  return s;
}

std::string episode_csv(const hybrid::EpisodeLog& log) {
  internal::CsvBuilder csv({"t", "ee_x", "ee_y", "ee_z", "obj_x", "obj_y",
                            "obj_z", "goal_x", "goal_y", "goal_z", "action_1",
                            "action_2", "action_3", "action_4", "beta", "J",
                            "reward", "contact", "success"});
  for (const auto& r : log.records) {
    csv.cell(r.t);
    for (int i = 0; i < 3; ++i) csv.cell(r.ee[i]);
    for (int i = 0; i < 3; ++i) csv.cell(r.obj[i]);
    for (int i = 0; i < 3; ++i) csv.cell(r.goal[i]);
    for (int i = 0; i < 4; ++i) csv.cell(r.action[i]);
    csv.cell(r.beta);
    csv.cell(r.cost_j);
    csv.cell(r.reward);
    csv.cell(r.contact);
    csv.cell(r.success);
    csv.endrow();
  }
  return csv.take();
}

ScenarioResult run_scenario(const ScenarioSpec& spec, const ddpg::Agent& agent,
                            const std::vector<hybrid::Mode>& modes,
                            const std::vector<std::uint64_t>& seeds,
                            const std::optional<std::string>& out_dir,
                            std::vector<std::string>* artifacts) {
  ScenarioResult result;
  result.spec = spec;

  sim::ResetPolicy reset;
  reset.randomize_goal = false;  // scenario goal is part of the spec

  for (const auto mode : modes) {
    auto& agg = result.aggregates[hybrid::mode_name(mode)];
    double switch_sum = 0.0;
    int switched = 0;
    for (const auto seed : seeds) {
      sim::ManipEnv env(spec.task, spec.workspace, spec.friction, spec.goal,
                        reset);
      // Same reset stream across modes: paired spawns per seed.
      Rng reset_rng = Rng::stream(seed, kResetStream);
      env.reset(reset_rng);

      hybrid::EpisodeOptions opt;
      opt.mode = mode;
      opt.horizon = spec.horizon;
      opt.es = spec.es;
      opt.stop_on_success = spec.stop_on_success;
      const hybrid::EpisodeLog log = hybrid::run_episode(env, agent, opt);

      ScenarioRow row{hybrid::mode_name(mode), seed, log.summary};
      result.rows.push_back(row);

      agg.runs += 1;
      agg.success_rate += log.summary.success ? 1.0 : 0.0;
      agg.mean_tracking_error += log.summary.mean_tracking_error;
      agg.mean_final_quarter_d2 += log.summary.final_quarter_mean_d2;
      agg.object_out_rate += log.summary.object_out ? 1.0 : 0.0;
      if (log.summary.switch_step >= 0) {
        switch_sum += static_cast<double>(log.summary.switch_step);
        ++switched;
      }

      if (out_dir) {
        const std::string file = spec.name + "_" +
                                 hybrid::mode_name(mode) + "_seed" +
                                 std::to_string(seed) + ".csv";
        write_text_file((std::filesystem::path(*out_dir) / file).string(),
                        episode_csv(log));
        if (artifacts) artifacts->push_back(file);
      }
    }
    if (agg.runs > 0) {
      agg.success_rate /= agg.runs;
      agg.mean_tracking_error /= agg.runs;
      agg.mean_final_quarter_d2 /= agg.runs;
      agg.object_out_rate /= agg.runs;
    }
    agg.mean_switch_step = switched > 0 ? switch_sum / switched : -1.0;
  }

  if (out_dir) {
    const std::string file = spec.name + "_summary.json";
    write_text_file((std::filesystem::path(*out_dir) / file).string(),
                    scenario_summary_json(result) + "\n");
    if (artifacts) artifacts->push_back(file);
  }
  return result;
}

std::string scenario_summary_json(const ScenarioResult& result) {
  internal::JsonEmitter e;
  e.begin_object();
  e.key("scenario").value(result.spec.name);
  e.key("horizon").value(static_cast<long long>(result.spec.horizon));
  e.key("aggregates").begin_object();
  for (const auto& [mode, agg] : result.aggregates) {
    e.key(mode.c_str()).begin_object();
    e.key("runs").value(agg.runs);
    e.key("success_rate").value(agg.success_rate);
    e.key("mean_tracking_error").value(agg.mean_tracking_error);
    e.key("mean_final_quarter_d2").value(agg.mean_final_quarter_d2);
    e.key("object_out_rate").value(agg.object_out_rate);
    e.key("mean_switch_step").value(agg.mean_switch_step);
    e.end_object();
  }
  e.end_object();
  e.key("rows").begin_array();
  for (const auto& row : result.rows) {
    e.begin_object();
    e.key("mode").value(row.mode);
    e.key("seed").value(static_cast<std::size_t>(row.seed));
    e.key("success").value(row.summary.success);
    e.key("final_d2").value(row.summary.final_d2);
    e.key("mean_tracking_error").value(row.summary.mean_tracking_error);
    e.key("final_quarter_mean_d2").value(row.summary.final_quarter_mean_d2);
    e.key("switch_step").value(static_cast<long long>(row.summary.switch_step));
    e.key("object_out").value(row.summary.object_out);
    e.key("steps").value(static_cast<long long>(row.summary.steps));
    e.end_object();
  }
  e.end_array();
  e.end_object();
  return e.take();
}

}  // namespace esdrl::harness
