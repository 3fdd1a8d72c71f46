#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "esdrl/ddpg/agent.hpp"
#include "esdrl/harness/config.hpp"
#include "esdrl/hybrid/episode.hpp"

namespace esdrl::harness {

// One of the deployment studies: out-of-distribution surface/goal with a
// checkpoint trained on the nominal uniform-friction, fixed-goal setup.
struct ScenarioSpec {
  std::string name;
  sim::Task task = sim::Task::kPush;
  sim::WorkspaceSpec workspace{};
  sim::FrictionMap friction{};
  sim::GoalSpec goal{};
  long horizon = 2500;
  es::EsParams es{};
  bool stop_on_success = true;  // false for tracking scenarios
};

// push_friction_fixed | push_friction_moving | pp_track3d. Throws
// ConfigError for unknown names.
ScenarioSpec scenario_by_name(const std::string& name);
std::vector<std::string> scenario_names();

struct ScenarioRow {
  std::string mode;
  std::uint64_t seed = 0;
  hybrid::EpisodeSummary summary;
};

struct ModeAggregate {
  int runs = 0;
  double success_rate = 0.0;
  double mean_tracking_error = 0.0;
  double mean_final_quarter_d2 = 0.0;
  double object_out_rate = 0.0;
  double mean_switch_step = -1.0;  // over switched runs only
};

struct ScenarioResult {
  ScenarioSpec spec;
  std::vector<ScenarioRow> rows;
  std::map<std::string, ModeAggregate> aggregates;  // keyed by mode name
};

// Runs every (mode, seed) pair; when out_dir is given, writes one trajectory
// CSV per pair plus <name>_summary.json. Resets are seeded identically
// across modes so comparisons are paired.
ScenarioResult run_scenario(const ScenarioSpec& spec, const ddpg::Agent& agent,
                            const std::vector<hybrid::Mode>& modes,
                            const std::vector<std::uint64_t>& seeds,
                            const std::optional<std::string>& out_dir,
                            std::vector<std::string>* artifacts = nullptr);

std::string scenario_summary_json(const ScenarioResult& result);

// Trajectory CSV for one episode (schema: t, ee/obj/goal xyz, action_1..4,
// beta, J, reward, contact, success).
std::string episode_csv(const hybrid::EpisodeLog& log);

}  // namespace esdrl::harness
