#include "esdrl/harness/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "esdrl/harness/toml_lite.hpp"
#include "src/internal/json_out.hpp"

namespace esdrl::harness {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
  throw ConfigError("config: " + path + ": " + msg);
}

void require_keys(const json& obj, const std::string& path,
                  const std::set<std::string>& known) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) {
      bad(path.empty() ? key : path + "." + key, "unknown key");
    }
  }
}

double get_num(const json& obj, const std::string& path, const char* key,
               double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) bad(path + "." + key, "expected a number");
  return v.get<double>();
}

long get_int(const json& obj, const std::string& path, const char* key,
             long fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) bad(path + "." + key, "expected an integer");
  return v.get<long>();
}

bool get_bool(const json& obj, const std::string& path, const char* key,
              bool fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) bad(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

std::string get_str(const json& obj, const std::string& path, const char* key,
                    const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) bad(path + "." + key, "expected a string");
  return v.get<std::string>();
}

void parse_workspace(const json& j, sim::WorkspaceSpec& ws) {
  const std::string p = "workspace";
  require_keys(j, p,
               {"x_max", "y_max", "table_height", "block_half_extent",
                "ee_step_scale", "horizon", "ee_z_range", "contact_tol",
                "grasp_radius", "gripper_step", "success_radius"});
  ws.x_max = get_num(j, p, "x_max", ws.x_max);
  ws.y_max = get_num(j, p, "y_max", ws.y_max);
  ws.table_height = get_num(j, p, "table_height", ws.table_height);
  ws.block_half_extent = get_num(j, p, "block_half_extent", ws.block_half_extent);
  ws.ee_step_scale = get_num(j, p, "ee_step_scale", ws.ee_step_scale);
  ws.horizon = static_cast<int>(get_int(j, p, "horizon", ws.horizon));
  ws.ee_z_range = get_num(j, p, "ee_z_range", ws.ee_z_range);
  ws.contact_tol = get_num(j, p, "contact_tol", ws.contact_tol);
  ws.grasp_radius = get_num(j, p, "grasp_radius", ws.grasp_radius);
  ws.gripper_step = get_num(j, p, "gripper_step", ws.gripper_step);
  ws.success_radius = get_num(j, p, "success_radius", ws.success_radius);
}

void parse_friction(const json& j, sim::FrictionMap& fm) {
  const std::string p = "friction";
  require_keys(j, p, {"default_mu", "stiction_scale", "patches"});
  fm.default_mu = get_num(j, p, "default_mu", fm.default_mu);
  fm.stiction_scale = get_num(j, p, "stiction_scale", fm.stiction_scale);
  if (j.contains("patches")) {
    if (!j.at("patches").is_array()) bad(p + ".patches", "expected an array");
    fm.patches.clear();
    int idx = 0;
    for (const auto& pj : j.at("patches")) {
      const std::string pp = p + ".patches[" + std::to_string(idx++) + "]";
      require_keys(pj, pp, {"x_lo", "y_lo", "x_hi", "y_hi", "mu"});
      sim::FrictionPatch patch;
      patch.x_lo = get_num(pj, pp, "x_lo", 0.0);
      patch.y_lo = get_num(pj, pp, "y_lo", 0.0);
      patch.x_hi = get_num(pj, pp, "x_hi", 0.0);
      patch.y_hi = get_num(pj, pp, "y_hi", 0.0);
      patch.mu = get_num(pj, pp, "mu", 0.0);
      fm.patches.push_back(patch);
    }
  }
}

void parse_goal(const json& j, ExperimentConfig& cfg) {
  const std::string p = "goal";
  const std::string kind = get_str(j, p, "kind", "randomized");
  if (kind == "randomized") {
    require_keys(j, p, {"kind"});
    cfg.goal_randomized = true;
    return;
  }
  cfg.goal_randomized = false;
  if (kind == "fixed") {
    require_keys(j, p, {"kind", "x", "y", "z"});
    cfg.goal = sim::GoalSpec::make_fixed({get_num(j, p, "x", 0.0),
                                          get_num(j, p, "y", 0.0),
                                          get_num(j, p, "z", 0.0)});
  } else if (kind == "circular") {
    require_keys(j, p, {"kind", "center_x", "center_y", "radius", "period", "z"});
    cfg.goal = sim::GoalSpec::make_circular(
        get_num(j, p, "center_x", 0.0), get_num(j, p, "center_y", 0.0),
        get_num(j, p, "radius", 0.0), get_int(j, p, "period", 1),
        get_num(j, p, "z", 0.0));
  } else if (kind == "helix") {
    require_keys(j, p, {"kind", "center_x", "center_y", "radius", "period_xy",
                        "z0", "amp_z", "period_z"});
    cfg.goal = sim::GoalSpec::make_helix(
        get_num(j, p, "center_x", 0.0), get_num(j, p, "center_y", 0.0),
        get_num(j, p, "radius", 0.0), get_int(j, p, "period_xy", 1),
        get_num(j, p, "z0", 0.0), get_num(j, p, "amp_z", 0.0),
        get_int(j, p, "period_z", 1));
  } else {
    bad(p + ".kind", "expected fixed|circular|helix|randomized");
  }
}

void parse_reset(const json& j, sim::ResetPolicy& rp) {
  const std::string p = "reset";
  require_keys(j, p,
               {"randomize_object", "object_region", "airborne_prob",
                "min_goal_height", "max_goal_height", "min_goal_object_gap"});
  rp.randomize_object = get_bool(j, p, "randomize_object", rp.randomize_object);
  rp.object_region = get_num(j, p, "object_region", rp.object_region);
  rp.airborne_prob = get_num(j, p, "airborne_prob", rp.airborne_prob);
  rp.min_goal_height = get_num(j, p, "min_goal_height", rp.min_goal_height);
  rp.max_goal_height = get_num(j, p, "max_goal_height", rp.max_goal_height);
  rp.min_goal_object_gap =
      get_num(j, p, "min_goal_object_gap", rp.min_goal_object_gap);
}

void parse_agent(const json& j, ddpg::Hyperparams& hp) {
  const std::string p = "agent";
  require_keys(j, p,
               {"gamma", "tau", "actor_lr", "critic_lr", "noise_std",
                "batch_size", "replay_capacity", "warmup_transitions",
                "episode_horizon"});
  hp.gamma = get_num(j, p, "gamma", hp.gamma);
  hp.tau = get_num(j, p, "tau", hp.tau);
  hp.actor_lr = get_num(j, p, "actor_lr", hp.actor_lr);
  hp.critic_lr = get_num(j, p, "critic_lr", hp.critic_lr);
  hp.noise_std = get_num(j, p, "noise_std", hp.noise_std);
  hp.batch_size = static_cast<int>(get_int(j, p, "batch_size", hp.batch_size));
  hp.replay_capacity = static_cast<std::size_t>(
      get_int(j, p, "replay_capacity", static_cast<long>(hp.replay_capacity)));
  hp.warmup_transitions = static_cast<int>(
      get_int(j, p, "warmup_transitions", hp.warmup_transitions));
  hp.episode_horizon = static_cast<int>(
      get_int(j, p, "episode_horizon", hp.episode_horizon));
}

void parse_es(const json& j, es::EsParams& es) {
  const std::string p = "es";
  require_keys(j, p, {"alpha", "k", "omega", "dt", "ratios"});
  es.alpha = get_num(j, p, "alpha", es.alpha);
  es.k = get_num(j, p, "k", es.k);
  es.omega = get_num(j, p, "omega", es.omega);
  es.dt = get_num(j, p, "dt", es.dt);
  if (j.contains("ratios")) {
    const auto& r = j.at("ratios");
    if (!r.is_array() || r.size() != 3) {
      bad(p + ".ratios", "expected an array of 3 numbers");
    }
    for (int i = 0; i < 3; ++i) es.ratios[i] = r[i].get<double>();
  }
}

}  // namespace

ExperimentConfig default_config(sim::Task task) {
  ExperimentConfig cfg;
  cfg.task = task;
  // Desk-scale training budget; Table-1 values return via --paper-scale.
  cfg.agent.replay_capacity = 200000;
  cfg.agent.batch_size = 64;
  if (task == sim::Task::kPickPlace) cfg.train.epochs = 300;
  return cfg;
}

void apply_paper_scale(ExperimentConfig& cfg) {
  cfg.paper_scale = true;
  cfg.agent.replay_capacity = 1000000;
  cfg.agent.batch_size = 256;
}

ExperimentConfig parse_config_json_text(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("config: not valid JSON: ") + ex.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be a table");

  require_keys(doc, "",
               {"task", "workspace", "friction", "goal", "reset", "agent",
                "es", "mode", "seeds", "seed_count", "horizon", "out_dir",
                "train", "eval"});

  const std::string task_name = get_str(doc, "", "task", "push");
  sim::Task task;
  if (task_name == "push") {
    task = sim::Task::kPush;
  } else if (task_name == "pick_place") {
    task = sim::Task::kPickPlace;
  } else {
    bad("task", "expected push|pick_place");
  }
  ExperimentConfig cfg = default_config(task);

  if (doc.contains("workspace")) parse_workspace(doc.at("workspace"), cfg.workspace);
  if (doc.contains("friction")) parse_friction(doc.at("friction"), cfg.friction);
  if (doc.contains("goal")) parse_goal(doc.at("goal"), cfg);
  if (doc.contains("reset")) parse_reset(doc.at("reset"), cfg.reset);
  if (doc.contains("agent")) parse_agent(doc.at("agent"), cfg.agent);
  if (doc.contains("es")) parse_es(doc.at("es"), cfg.es);

  const std::string mode = get_str(doc, "", "mode", "hybrid");
  if (mode == "rl_only") {
    cfg.mode = hybrid::Mode::kRlOnly;
  } else if (mode == "es_only") {
    cfg.mode = hybrid::Mode::kEsOnly;
  } else if (mode == "hybrid") {
    cfg.mode = hybrid::Mode::kHybrid;
  } else {
    bad("mode", "expected rl_only|es_only|hybrid");
  }

  if (doc.contains("seeds") && doc.contains("seed_count")) {
    bad("seeds", "give either seeds or seed_count, not both");
  }
  if (doc.contains("seeds")) {
    const auto& s = doc.at("seeds");
    if (!s.is_array() || s.empty()) bad("seeds", "expected a non-empty array");
    cfg.seeds.clear();
    for (const auto& v : s) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        bad("seeds", "expected non-negative integers");
      }
      cfg.seeds.push_back(v.get<std::uint64_t>());
    }
  } else if (doc.contains("seed_count")) {
    const long n = get_int(doc, "", "seed_count", 1);
    if (n < 1) bad("seed_count", "must be >= 1");
    cfg.seeds.clear();
    for (long i = 0; i < n; ++i) cfg.seeds.push_back(static_cast<std::uint64_t>(i));
  }

  cfg.horizon = get_int(doc, "", "horizon", cfg.horizon);
  cfg.out_dir = get_str(doc, "", "out_dir", cfg.out_dir);

  if (doc.contains("train")) {
    const auto& t = doc.at("train");
    require_keys(t, "train",
                 {"epochs", "episodes_per_epoch", "smoothing",
                  "early_stop_success"});
    if (t.contains("epochs")) cfg.train_epochs_explicit = true;
    cfg.train.epochs = static_cast<int>(get_int(t, "train", "epochs", cfg.train.epochs));
    cfg.train.episodes_per_epoch = static_cast<int>(
        get_int(t, "train", "episodes_per_epoch", cfg.train.episodes_per_epoch));
    cfg.train.smoothing = get_num(t, "train", "smoothing", cfg.train.smoothing);
    cfg.train.early_stop_success =
        get_num(t, "train", "early_stop_success", cfg.train.early_stop_success);
  }
  if (doc.contains("eval")) {
    const auto& e = doc.at("eval");
    require_keys(e, "eval", {"episodes"});
    cfg.eval.episodes = static_cast<int>(get_int(e, "eval", "episodes", cfg.eval.episodes));
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".toml") {
    return parse_config_json_text(toml_to_json_text(text));
  }
  return parse_config_json_text(text);
}

void ExperimentConfig::validate() const {
  try {
    workspace.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("config: workspace: ") + ex.what());
  }
  try {
    friction.validate(workspace);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("config: friction: ") + ex.what());
  }
  if (!goal_randomized) {
    try {
      goal.validate(workspace);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(std::string("config: goal: ") + ex.what());
    }
  }
  try {
    agent.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("config: agent: ") + ex.what());
  }
  try {
    es.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("config: es: ") + ex.what());
  }
  if (horizon < 1) throw ConfigError("config: horizon: must be >= 1");
  if (seeds.empty()) throw ConfigError("config: seeds: must not be empty");
  if (train.epochs < 0 || train.episodes_per_epoch < 1) {
    throw ConfigError("config: train: bad epoch/episode counts");
  }
  if (train.smoothing < 0.0 || train.smoothing >= 1.0) {
    throw ConfigError("config: train.smoothing: must be in [0,1)");
  }
  if (eval.episodes < 0) throw ConfigError("config: eval.episodes: must be >= 0");
  if (reset.object_region <= 0.0 || reset.object_region > 1.0) {
    throw ConfigError("config: reset.object_region: must be in (0,1]");
  }
  if (reset.airborne_prob < 0.0 || reset.airborne_prob > 1.0) {
    throw ConfigError("config: reset.airborne_prob: must be in [0,1]");
  }
}

std::string ExperimentConfig::canonical_json() const {
  json j;  // nlohmann::json orders keys lexicographically
  j["task"] = task == sim::Task::kPush ? "push" : "pick_place";
  j["workspace"] = {{"x_max", workspace.x_max},
                    {"y_max", workspace.y_max},
                    {"table_height", workspace.table_height},
                    {"block_half_extent", workspace.block_half_extent},
                    {"ee_step_scale", workspace.ee_step_scale},
                    {"horizon", workspace.horizon},
                    {"ee_z_range", workspace.ee_z_range},
                    {"contact_tol", workspace.contact_tol},
                    {"grasp_radius", workspace.grasp_radius},
                    {"gripper_step", workspace.gripper_step},
                    {"success_radius", workspace.success_radius}};
  json patches = json::array();
  for (const auto& p : friction.patches) {
    patches.push_back({{"x_lo", p.x_lo},
                       {"y_lo", p.y_lo},
                       {"x_hi", p.x_hi},
                       {"y_hi", p.y_hi},
                       {"mu", p.mu}});
  }
  j["friction"] = {{"default_mu", friction.default_mu},
                   {"stiction_scale", friction.stiction_scale},
                   {"patches", patches}};
  if (goal_randomized) {
    j["goal"] = {{"kind", "randomized"}};
  } else {
    switch (goal.kind) {
      case sim::GoalSpec::Kind::kFixed:
        j["goal"] = {{"kind", "fixed"},
                     {"x", goal.fixed.x()},
                     {"y", goal.fixed.y()},
                     {"z", goal.fixed.z()}};
        break;
      case sim::GoalSpec::Kind::kCircular:
        j["goal"] = {{"kind", "circular"},
                     {"center_x", goal.circular.center_x},
                     {"center_y", goal.circular.center_y},
                     {"radius", goal.circular.radius},
                     {"period", goal.circular.period},
                     {"z", goal.circular.z}};
        break;
      case sim::GoalSpec::Kind::kHelix:
        j["goal"] = {{"kind", "helix"},
                     {"center_x", goal.helix.center_x},
                     {"center_y", goal.helix.center_y},
                     {"radius", goal.helix.radius},
                     {"period_xy", goal.helix.period_xy},
                     {"z0", goal.helix.z0},
                     {"amp_z", goal.helix.amp_z},
                     {"period_z", goal.helix.period_z}};
        break;
    }
  }
  j["reset"] = {{"randomize_object", reset.randomize_object},
                {"object_region", reset.object_region},
                {"airborne_prob", reset.airborne_prob},
                {"min_goal_height", reset.min_goal_height},
                {"max_goal_height", reset.max_goal_height},
                {"min_goal_object_gap", reset.min_goal_object_gap}};
  j["agent"] = {{"gamma", agent.gamma},
                {"tau", agent.tau},
                {"actor_lr", agent.actor_lr},
                {"critic_lr", agent.critic_lr},
                {"noise_std", agent.noise_std},
                {"batch_size", agent.batch_size},
                {"replay_capacity", agent.replay_capacity},
                {"warmup_transitions", agent.warmup_transitions},
                {"episode_horizon", agent.episode_horizon}};
  j["es"] = {{"alpha", es.alpha},
             {"k", es.k},
             {"omega", es.omega},
             {"dt", es.dt},
             {"ratios", {es.ratios[0], es.ratios[1], es.ratios[2]}}};
  j["mode"] = mode_name(mode);
  j["seeds"] = seeds;
  j["horizon"] = horizon;
  j["paper_scale"] = paper_scale;
  j["train"] = {{"epochs", train.epochs},
                {"episodes_per_epoch", train.episodes_per_epoch},
                {"smoothing", train.smoothing},
                {"early_stop_success", train.early_stop_success}};
  j["eval"] = {{"episodes", eval.episodes}};
  // out_dir intentionally excluded: moving outputs must not change the hash.
  return j.dump();
}

std::string ExperimentConfig::canonical_hash() const {
  const std::string text = canonical_json();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace esdrl::harness
