#pragma once

// Internal (not installed): shared network <-> JSON field codecs used by the
// single-network checkpoint API and the agent checkpoint composer.

#include <json.hpp>

#include "esdrl/net/adam.hpp"
#include "esdrl/net/mlp.hpp"
#include "src/internal/json_out.hpp"

namespace esdrl::internal {

void emit_spec(JsonEmitter& e, const net::MlpSpec& spec);
void emit_tensor_list(JsonEmitter& e, net::MlpParams& params);
void emit_optimizer(JsonEmitter& e, const net::AdamState& opt);

// Emits {"spec":..., "tensors":[...], "optimizer":...} fields into an open
// object. params is const in effect; non-const only to reuse named_tensors.
void emit_network_fields(JsonEmitter& e, const net::MlpSpec& spec,
                         net::MlpParams params, const net::AdamState* opt);

net::MlpSpec parse_spec(const nlohmann::json& j);
net::MlpParams parse_tensor_list(const nlohmann::json& j,
                                 const net::MlpSpec& spec);
net::AdamState parse_optimizer(const nlohmann::json& j,
                               const net::MlpSpec& spec);

}  // namespace esdrl::internal
