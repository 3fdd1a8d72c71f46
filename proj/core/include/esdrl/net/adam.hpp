#pragma once

#include <cstdint>

#include "esdrl/net/mlp.hpp"

namespace esdrl::net {

// Thrown when an update would inject non-finite values into the network.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AdamState {
  MlpParams m;  // first moments, parameter-shaped
  MlpParams v;  // second moments
  std::int64_t step = 0;
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState init(const MlpSpec& spec, double learning_rate);
};

// One bias-corrected Adam step in place. Throws DivergenceError if grads
// contain non-finite entries.
void adam_step(AdamState& state, MlpParams& params, const GradientSet& grads);

}  // namespace esdrl::net
