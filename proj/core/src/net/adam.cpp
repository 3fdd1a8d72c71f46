#include "esdrl/net/adam.hpp"

#include <cmath>

namespace esdrl::net {

AdamState AdamState::init(const MlpSpec& spec, double learning_rate) {
  AdamState s;
  s.m = zeros_like(spec);
  s.v = zeros_like(spec);
  s.learning_rate = learning_rate;
  return s;
}

namespace {

template <typename T>
void update_tensor(T& p, T& m, T& v, const T& g, double lr, double b1,
                   double b2, double eps, double bc1, double bc2) {
  m = b1 * m + (1.0 - b1) * g;
  v = (b2 * v.array() + (1.0 - b2) * g.array().square()).matrix();
  p -= (lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps)).matrix();
}

}  // namespace

void adam_step(AdamState& state, MlpParams& params, const GradientSet& grads) {
  if (!grads.all_finite()) {
    throw DivergenceError("adam_step: non-finite gradient");
  }
  if (!params.shape_congruent(grads) || !params.shape_congruent(state.m)) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));

  for (std::size_t i = 0; i < params.dense.size(); ++i) {
    update_tensor(params.dense[i].weights, state.m.dense[i].weights,
                  state.v.dense[i].weights, grads.dense[i].weights,
                  state.learning_rate, state.beta1, state.beta2, state.epsilon,
                  bc1, bc2);
    update_tensor(params.dense[i].biases, state.m.dense[i].biases,
                  state.v.dense[i].biases, grads.dense[i].biases,
                  state.learning_rate, state.beta1, state.beta2, state.epsilon,
                  bc1, bc2);
  }
  for (std::size_t i = 0; i < params.norm.size(); ++i) {
    update_tensor(params.norm[i].gain, state.m.norm[i].gain,
                  state.v.norm[i].gain, grads.norm[i].gain,
                  state.learning_rate, state.beta1, state.beta2, state.epsilon,
                  bc1, bc2);
    update_tensor(params.norm[i].shift, state.m.norm[i].shift,
                  state.v.norm[i].shift, grads.norm[i].shift,
                  state.learning_rate, state.beta1, state.beta2, state.epsilon,
                  bc1, bc2);
  }
}

}  // namespace esdrl::net
