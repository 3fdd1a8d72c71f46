#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "esdrl/ddpg/agent.hpp"
#include "esdrl/es/controller.hpp"
#include "esdrl/hybrid/episode.hpp"
#include "esdrl/sim/env.hpp"

namespace esdrl::harness {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrainSection {
  int epochs = 150;  // pick_place defaults to 300 unless set explicitly
  int episodes_per_epoch = 100;
  double smoothing = 0.9;
  double early_stop_success = -1.0;
};

struct EvalSection {
  int episodes = 20;
};

// Fully validated experiment description. Field defaults are the desk-scale
// deployment; `paper_scale` restores the published table of training
// hyperparameters (replay 1e6, batch 256).
struct ExperimentConfig {
  sim::Task task = sim::Task::kPush;
  sim::WorkspaceSpec workspace{};
  sim::FrictionMap friction{};       // uniform default_mu unless patches given
  bool goal_randomized = true;       // per-episode goal sampling
  sim::GoalSpec goal{};              // used when goal_randomized is false
  sim::ResetPolicy reset{};
  ddpg::Hyperparams agent{};         // Table-1 values
  es::EsParams es{};
  hybrid::Mode mode = hybrid::Mode::kHybrid;
  std::vector<std::uint64_t> seeds = {0};
  long horizon = 50;                 // evaluation episode length
  std::string out_dir = "out";
  bool paper_scale = false;
  TrainSection train{};
  bool train_epochs_explicit = false;
  EvalSection eval{};

  // Cross-field validation (throws ConfigError naming the offending path).
  void validate() const;

  // FNV-1a over the canonical (key-sorted) serialization; stable under key
  // reordering in the source file.
  std::string canonical_hash() const;
  std::string canonical_json() const;
};

// Desk-scale defaults for the given task (the state reached by parsing an
// empty config).
ExperimentConfig default_config(sim::Task task);

// Loads TOML (by extension .toml) or JSON. Unknown keys anywhere are
// rejected with their full path.
ExperimentConfig load_config_file(const std::string& path);
ExperimentConfig parse_config_json_text(const std::string& json_text);

// Applies --paper-scale: Table-1 replay capacity and batch size.
void apply_paper_scale(ExperimentConfig& cfg);

}  // namespace esdrl::harness
