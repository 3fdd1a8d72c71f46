#include "esdrl/net/checkpoint.hpp"

#include <algorithm>

#include <json.hpp>

#include "src/internal/checkpoint_io.hpp"
#include "src/internal/json_out.hpp"

namespace esdrl::internal {

using nlohmann::json;

void emit_spec(JsonEmitter& e, const net::MlpSpec& spec) {
  e.begin_object();
  e.key("input_dim").value(spec.input_dim);
  e.key("hidden_dims").begin_array();
  for (int h : spec.hidden_dims) e.value(h);
  e.end_array();
  e.key("output_dim").value(spec.output_dim);
  e.key("output_head")
      .value(spec.output_head == net::OutputHead::kTanh ? "tanh" : "linear");
  e.end_object();
}

namespace {

void emit_one_tensor(JsonEmitter& e, const std::string& name,
                     const Eigen::MatrixXd* m, const Eigen::VectorXd* v) {
  e.begin_object();
  e.key("name").value(name);
  const Eigen::Index rows = m ? m->rows() : v->size();
  const Eigen::Index cols = m ? m->cols() : 1;
  e.key("rows").value(static_cast<long long>(rows));
  e.key("cols").value(static_cast<long long>(cols));
  e.key("data").begin_array();
  if (m) {
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) e.value((*m)(r, c));
  } else {
    for (Eigen::Index r = 0; r < rows; ++r) e.value((*v)(r));
  }
  e.end_array();
  e.end_object();
}

}  // namespace

void emit_tensor_list(JsonEmitter& e, net::MlpParams& params) {
  e.begin_array();
  for (const auto& t : net::named_tensors(params)) {
    emit_one_tensor(e, t.name, t.matrix, t.vector);
  }
  e.end_array();
}

void emit_optimizer(JsonEmitter& e, const net::AdamState& opt) {
  e.begin_object();
  e.key("step").value(static_cast<long long>(opt.step));
  e.key("learning_rate").value(opt.learning_rate);
  e.key("beta1").value(opt.beta1);
  e.key("beta2").value(opt.beta2);
  e.key("epsilon").value(opt.epsilon);
  net::MlpParams m = opt.m;
  net::MlpParams v = opt.v;
  e.key("m");
  emit_tensor_list(e, m);
  e.key("v");
  emit_tensor_list(e, v);
  e.end_object();
}

void emit_network_fields(JsonEmitter& e, const net::MlpSpec& spec,
                         net::MlpParams params, const net::AdamState* opt) {
  e.key("norm_epsilon")
      .value(params.norm.empty() ? 1e-5 : params.norm.front().epsilon);
  e.key("spec");
  emit_spec(e, spec);
  e.key("tensors");
  emit_tensor_list(e, params);
  if (opt) {
    e.key("optimizer");
    emit_optimizer(e, *opt);
  }
}

net::MlpSpec parse_spec(const json& j) {
  try {
    net::MlpSpec spec;
    spec.input_dim = j.at("input_dim").get<int>();
    spec.hidden_dims = j.at("hidden_dims").get<std::vector<int>>();
    spec.output_dim = j.at("output_dim").get<int>();
    const std::string head = j.at("output_head").get<std::string>();
    if (head == "tanh") {
      spec.output_head = net::OutputHead::kTanh;
    } else if (head == "linear") {
      spec.output_head = net::OutputHead::kLinear;
    } else {
      throw net::CheckpointError("unknown output_head: " + head);
    }
    spec.validate();
    return spec;
  } catch (const json::exception& ex) {
    throw net::CheckpointError(std::string("bad spec block: ") + ex.what());
  }
}

net::MlpParams parse_tensor_list(const json& j, const net::MlpSpec& spec) {
  net::MlpParams params = net::zeros_like(spec);
  auto slots = net::named_tensors(params);
  if (!j.is_array() || j.size() != slots.size()) {
    throw net::CheckpointError("tensor list has wrong length");
  }
  std::size_t filled = 0;
  for (const auto& entry : j) {
    const std::string name = entry.at("name").get<std::string>();
    auto it = std::find_if(slots.begin(), slots.end(),
                           [&](const auto& s) { return s.name == name; });
    if (it == slots.end()) {
      throw net::CheckpointError("unexpected tensor name: " + name);
    }
    const auto rows = entry.at("rows").get<Eigen::Index>();
    const auto cols = entry.at("cols").get<Eigen::Index>();
    const auto& data = entry.at("data");
    const Eigen::Index want_rows = it->matrix ? it->matrix->rows() : it->vector->size();
    const Eigen::Index want_cols = it->matrix ? it->matrix->cols() : 1;
    if (rows != want_rows || cols != want_cols ||
        static_cast<Eigen::Index>(data.size()) != rows * cols) {
      throw net::CheckpointError("tensor shape mismatch for " + name);
    }
    if (it->matrix) {
      Eigen::Index i = 0;
      for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
          (*it->matrix)(r, c) = data[i++].get<double>();
    } else {
      for (Eigen::Index r = 0; r < rows; ++r)
        (*it->vector)(r) = data[r].get<double>();
    }
    ++filled;
  }
  if (filled != slots.size()) {
    throw net::CheckpointError("duplicate or missing tensors");
  }
  return params;
}

net::AdamState parse_optimizer(const json& j, const net::MlpSpec& spec) {
  net::AdamState s;
  s.step = j.at("step").get<std::int64_t>();
  s.learning_rate = j.at("learning_rate").get<double>();
  s.beta1 = j.at("beta1").get<double>();
  s.beta2 = j.at("beta2").get<double>();
  s.epsilon = j.at("epsilon").get<double>();
  s.m = parse_tensor_list(j.at("m"), spec);
  s.v = parse_tensor_list(j.at("v"), spec);
  return s;
}

}  // namespace esdrl::internal

namespace esdrl::net {

std::string network_to_json(const MlpSpec& spec, const MlpParams& params,
                            const AdamState* optimizer) {
  internal::JsonEmitter e;
  e.begin_object();
  e.key("format_version").value(kCheckpointVersion);
  internal::emit_network_fields(e, spec, params, optimizer);
  e.end_object();
  return e.take();
}

LoadedNetwork network_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw CheckpointError(std::string("not valid JSON: ") + ex.what());
  }
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kCheckpointVersion) {
      throw CheckpointError(
          "checkpoint format_version " + std::to_string(version) +
          " unsupported (expected " + std::to_string(kCheckpointVersion) +
          "); re-export the checkpoint with a matching tool version");
    }
    LoadedNetwork out;
    out.spec = internal::parse_spec(doc.at("spec"));
    out.params = internal::parse_tensor_list(doc.at("tensors"), out.spec);
    const double norm_eps = doc.value("norm_epsilon", 1e-5);
    for (auto& n : out.params.norm) n.epsilon = norm_eps;
    if (doc.contains("optimizer")) {
      out.has_optimizer = true;
      out.optimizer = internal::parse_optimizer(doc.at("optimizer"), out.spec);
    }
    return out;
  } catch (const nlohmann::json::exception& ex) {
    throw CheckpointError(std::string("malformed checkpoint: ") + ex.what());
  }
}

}  // namespace esdrl::net
