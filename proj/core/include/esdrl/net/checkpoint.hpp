#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "esdrl/net/adam.hpp"
#include "esdrl/net/mlp.hpp"

namespace esdrl::net {

// Malformed, truncated or version-incompatible checkpoint data.
struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kCheckpointVersion = 1;

// Serializes one network (spec + named tensors in row-major order, plus the
// optimizer state when given) as a JSON document. Numbers carry 17
// significant digits, so save -> load -> save is byte-identical.
std::string network_to_json(const MlpSpec& spec, const MlpParams& params,
                            const AdamState* optimizer = nullptr);

struct LoadedNetwork {
  MlpSpec spec;
  MlpParams params;
  bool has_optimizer = false;
  AdamState optimizer;
};

LoadedNetwork network_from_json(std::string_view text);

}  // namespace esdrl::net
