#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "esdrl/common/rng.hpp"
#include "esdrl/harness/commands.hpp"
#include "esdrl/harness/config.hpp"
#include "esdrl/harness/manifest.hpp"
#include "esdrl/harness/scenario.hpp"
#include "esdrl/harness/toml_lite.hpp"
#include "esdrl/net/checkpoint.hpp"

using namespace esdrl;
using namespace esdrl::harness;

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("esdrl_test_" + tag);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("toml_lite") {
  SUBCASE("tables, arrays, numbers, strings, booleans, comments") {
    const std::string toml = R"(# experiment
task = "push"
horizon = 2500
mode = "hybrid"

[es]
alpha = 0.96
k = 6.0e1          # scientific
ratios = [1.0, 1.75, 2.9]

[friction]
default_mu = 0.5

[[friction.patches]]
x_lo = 0.0
y_lo = 0.0
x_hi = 0.33
y_hi = 1.0
mu = 0.8

[[friction.patches]]
x_lo = 0.33
y_lo = 0.0
x_hi = 1.0
y_hi = 1.0
mu = 1.5

[train]
epochs = 10
)";
    auto j = nlohmann::json::parse(toml_to_json_text(toml));
    CHECK(j["task"] == "push");
    CHECK(j["horizon"] == 2500);
    CHECK(j["es"]["k"] == 60.0);
    CHECK(j["es"]["ratios"].size() == 3);
    CHECK(j["friction"]["patches"].size() == 2);
    CHECK(j["friction"]["patches"][1]["mu"] == 1.5);
    CHECK(j["train"]["epochs"] == 10);
  }
  SUBCASE("inline tables and dotted keys") {
    auto j = nlohmann::json::parse(toml_to_json_text(
        "goal = { kind = \"fixed\", x = 0.9, y = 0.9, z = 0.475 }\n"
        "agent.gamma = 0.99\n"));
    CHECK(j["goal"]["kind"] == "fixed");
    CHECK(j["agent"]["gamma"] == 0.99);
  }
  SUBCASE("errors carry line numbers") {
    try {
      toml_to_json_text("ok = 1\nbroken = \n");
      FAIL("expected TomlError");
    } catch (const TomlError& ex) {
      CHECK(std::string(ex.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("duplicate keys rejected") {
    CHECK_THROWS_AS(toml_to_json_text("a = 1\na = 2\n"), TomlError);
  }
}

TEST_CASE("config parsing and validation") {
  SUBCASE("defaults are desk scale") {
    ExperimentConfig cfg = default_config(sim::Task::kPush);
    CHECK(cfg.agent.replay_capacity == 200000);
    CHECK(cfg.agent.batch_size == 64);
    CHECK(cfg.train.epochs == 150);
    CHECK(default_config(sim::Task::kPickPlace).train.epochs == 300);
    CHECK_NOTHROW(cfg.validate());
  }
  SUBCASE("paper scale restores the published table") {
    ExperimentConfig cfg = default_config(sim::Task::kPush);
    apply_paper_scale(cfg);
    CHECK(cfg.agent.replay_capacity == 1000000);
    CHECK(cfg.agent.batch_size == 256);
    CHECK(cfg.agent.gamma == 0.99);
    CHECK(cfg.agent.tau == 0.005);
    CHECK(cfg.agent.actor_lr == 1e-4);
    CHECK(cfg.agent.noise_std == 0.1);
  }
  SUBCASE("unknown keys are rejected with their path") {
    try {
      parse_config_json_text(R"({"agent": {"gamm": 0.9}})");
      FAIL("expected ConfigError");
    } catch (const ConfigError& ex) {
      CHECK(std::string(ex.what()).find("agent.gamm") != std::string::npos);
    }
  }
  SUBCASE("invalid values are rejected with their path") {
    CHECK_THROWS_AS(parse_config_json_text(R"({"agent": {"gamma": 1.5}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_json_text(R"({"horizon": 0})"), ConfigError);
    CHECK_THROWS_AS(
        parse_config_json_text(
            R"({"goal": {"kind": "circular", "center_x": 0.99, "center_y": 0.99,
                "radius": 0.05, "period": 200, "z": 0.45}})"),
        ConfigError);
  }
  SUBCASE("TOML and JSON configs parse identically") {
    auto dir = temp_dir("cfg");
    const std::string toml =
        "task = \"push\"\nhorizon = 123\n[es]\nk = 42.0\n";
    const std::string json =
        R"({"task": "push", "horizon": 123, "es": {"k": 42.0}})";
    std::ofstream(dir / "a.toml") << toml;
    std::ofstream(dir / "b.json") << json;
    ExperimentConfig a = load_config_file((dir / "a.toml").string());
    ExperimentConfig b = load_config_file((dir / "b.json").string());
    CHECK(a.canonical_hash() == b.canonical_hash());
    CHECK(a.es.k == 42.0);
    CHECK(a.horizon == 123);
  }
  SUBCASE("hash is stable under key reordering") {
    ExperimentConfig a =
        parse_config_json_text(R"({"horizon": 9, "task": "push"})");
    ExperimentConfig b =
        parse_config_json_text(R"({"task": "push", "horizon": 9})");
    CHECK(a.canonical_hash() == b.canonical_hash());
    ExperimentConfig c =
        parse_config_json_text(R"({"task": "push", "horizon": 10})");
    CHECK(a.canonical_hash() != c.canonical_hash());
  }
}

TEST_CASE("network checkpoint round trip") {
  net::MlpSpec spec{3, {4}, 2, net::OutputHead::kTanh};
  Rng rng(31);
  net::MlpParams params = net::init_params(spec, rng);
  net::AdamState opt = net::AdamState::init(spec, 1e-4);

  const std::string text = net::network_to_json(spec, params, &opt);
  net::LoadedNetwork loaded = net::network_from_json(text);
  CHECK(loaded.spec == spec);
  CHECK(loaded.has_optimizer);
  // Byte-identical re-serialization certifies a decimal-lossless round trip.
  CHECK(net::network_to_json(loaded.spec, loaded.params, &loaded.optimizer) ==
        text);

  SUBCASE("truncated file fails with a format error") {
    CHECK_THROWS_AS(net::network_from_json(text.substr(0, text.size() / 2)),
                    net::CheckpointError);
  }
  SUBCASE("version mismatch is refused with a hint") {
    std::string bumped = text;
    const auto pos = bumped.find("\"format_version\":1");
    REQUIRE(pos != std::string::npos);
    bumped.replace(pos, 18, "\"format_version\":9");
    try {
      net::network_from_json(bumped);
      FAIL("expected CheckpointError");
    } catch (const net::CheckpointError& ex) {
      CHECK(std::string(ex.what()).find("format_version") != std::string::npos);
    }
  }
}

TEST_CASE("es-verify command") {
  auto dir = temp_dir("esv");
  SUBCASE("default sweep writes a report and per-omega trajectories") {
    EsVerifyOptions opt;
    opt.omegas = {25.0, 50.0};
    opt.horizon = 1.0;  // short run for the unit test
    std::ostringstream out;
    std::vector<EsVerifyRow> rows;
    CHECK(cmd_es_verify(opt, dir.string(), out, &rows) == 0);
    CHECK(rows.size() == 2);
    CHECK(std::filesystem::exists(dir / "es_verify_report.csv"));
    CHECK(std::filesystem::exists(dir / "es_verify_omega25.csv"));
    CHECK(std::filesystem::exists(dir / "manifest.json"));
  }
  SUBCASE("k*alpha = 0 gives two constant trajectories with zero gap") {
    EsVerifyOptions opt;
    opt.omegas = {25.0};
    opt.alpha = 0.0;
    opt.horizon = 1.0;
    std::ostringstream out;
    std::vector<EsVerifyRow> rows;
    CHECK(cmd_es_verify(opt, dir.string(), out, &rows) == 0);
    CHECK(rows[0].gap == 0.0);
  }
  SUBCASE("non-ascending sweep rejected") {
    EsVerifyOptions opt;
    opt.omegas = {50.0, 25.0};
    std::ostringstream out;
    CHECK(cmd_es_verify(opt, dir.string(), out) != 0);
  }
}

TEST_CASE("manifest verifies artifacts and serializes") {
  auto dir = temp_dir("mani");
  write_text_file((dir / "thing.csv").string(), "a,b\n1,2\n");
  RunManifest m("deadbeef", {1, 2});
  m.add_artifact("thing.csv");
  m.add_summary("s", R"({"ok":true})");
  CHECK_NOTHROW(m.write(dir.string()));
  auto j = nlohmann::json::parse(read_text_file((dir / "manifest.json").string()));
  CHECK(j["config_hash"] == "deadbeef");
  CHECK(j["summaries"]["s"]["ok"] == true);

  RunManifest bad("x", {});
  bad.add_artifact("missing.csv");
  CHECK_THROWS(bad.write(dir.string()));
}

TEST_CASE("scenario presets validate and unknown names are rejected") {
  for (const auto& name : scenario_names()) {
    ScenarioSpec s = scenario_by_name(name);
    CHECK_NOTHROW(s.workspace.validate());
    CHECK_NOTHROW(s.friction.validate(s.workspace));
    CHECK_NOTHROW(s.goal.validate(s.workspace));
    CHECK_NOTHROW(s.es.validate());
  }
  CHECK_THROWS_AS(scenario_by_name("bogus"), ConfigError);
}

TEST_CASE("train command: zero epochs still writes a loadable checkpoint") {
  auto dir = temp_dir("train0");
  ExperimentConfig cfg = default_config(sim::Task::kPush);
  cfg.train.epochs = 0;
  cfg.out_dir = dir.string();
  std::ostringstream out;
  TrainOutput result;
  REQUIRE(cmd_train(cfg, 7, out, &result) == 0);
  CHECK(std::filesystem::exists(result.checkpoint_path));
  ddpg::Agent agent = load_agent_checkpoint(result.checkpoint_path);
  CHECK(agent.state_dim() == 28);
  // Curve file exists and is empty (no epochs).
  CHECK(read_text_file(result.curve_path).empty());
}

TEST_CASE("eval command: zero episodes reports empty metrics") {
  auto dir = temp_dir("eval0");
  ExperimentConfig cfg = default_config(sim::Task::kPush);
  cfg.train.epochs = 0;
  cfg.out_dir = dir.string();
  std::ostringstream out;
  TrainOutput t;
  REQUIRE(cmd_train(cfg, 3, out, &t) == 0);
  std::ostringstream eval_out;
  CHECK(cmd_eval(cfg, t.checkpoint_path, 0, 3, eval_out) == 0);
  auto j = nlohmann::json::parse(
      read_text_file((dir / "eval_metrics.json").string()));
  CHECK(j["episodes"] == 0);
  CHECK(j["success_rate"] == 0.0);
}

TEST_CASE("scenario rerun with identical config and seeds is byte-identical") {
  auto dir1 = temp_dir("scn1");
  auto dir2 = temp_dir("scn2");
  ExperimentConfig cfg = default_config(sim::Task::kPush);
  cfg.train.epochs = 0;
  cfg.out_dir = (temp_dir("scn_ckpt")).string();
  std::ostringstream out;
  TrainOutput t;
  REQUIRE(cmd_train(cfg, 5, out, &t) == 0);

  auto run_into = [&](const std::string& out_dir) {
    ExperimentConfig c = default_config(sim::Task::kPush);
    c.seeds = {0, 1, 2};
    c.out_dir = out_dir;
    std::ostringstream so;
    ScenarioResult r;
    REQUIRE(cmd_scenario(c, "push_friction_fixed", t.checkpoint_path,
                         {hybrid::Mode::kRlOnly, hybrid::Mode::kHybrid}, so,
                         &r) == 0);
  };
  run_into(dir1.string());
  run_into(dir2.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir1)) {
    const auto name = entry.path().filename();
    CHECK(read_text_file(entry.path().string()) ==
          read_text_file((dir2 / name).string()));
  }
}
