#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "esdrl/common/rng.hpp"

namespace esdrl::net {

// Fully-connected layer, weights are (out x in).
struct DenseLayer {
  Eigen::MatrixXd weights;
  Eigen::VectorXd biases;
};

// Layer normalization over the feature axis of a single sample, with
// learnable per-feature gain and shift.
struct NormLayer {
  Eigen::VectorXd gain;
  Eigen::VectorXd shift;
  double epsilon = 1e-5;
};

enum class OutputHead { kTanh, kLinear };

struct MlpSpec {
  int input_dim = 0;
  std::vector<int> hidden_dims;
  int output_dim = 0;
  OutputHead output_head = OutputHead::kLinear;

  // Throws std::invalid_argument on non-positive dimensions.
  void validate() const;

  int layer_count() const { return static_cast<int>(hidden_dims.size()) + 1; }

  bool operator==(const MlpSpec&) const = default;

  // The two deployed topologies: 28 -> 256 -> 256 -> 4 (tanh) and
  // (28+4) -> 256 -> 256 -> 1 (linear). Hidden layers are
  // dense -> layer norm -> relu.
  static MlpSpec actor(int state_dim = 28, int action_dim = 4);
  static MlpSpec critic(int state_dim = 28, int action_dim = 4);
};

// Parameter container; also reused for gradients and optimizer moments,
// which mirror the parameter layout exactly.
struct MlpParams {
  std::vector<DenseLayer> dense;  // hidden layers then output layer
  std::vector<NormLayer> norm;    // one per hidden layer

  std::size_t tensor_count() const { return 2 * dense.size() + 2 * norm.size(); }
  bool shape_congruent(const MlpParams& other) const;
  bool all_finite() const;
};

using GradientSet = MlpParams;

// Zero-valued parameter set with the spec's shape (norm epsilon kept).
MlpParams zeros_like(const MlpSpec& spec);

// Uniform fan-in init (+-1/sqrt(fan_in)) for hidden layers, +-3e-3 for the
// output layer; norm gains 1, shifts 0.
MlpParams init_params(const MlpSpec& spec, Rng& rng);

// Batched activations; rows are samples.
struct ForwardCache {
  Eigen::MatrixXd input;  // B x in
  struct Hidden {
    Eigen::MatrixXd pre_norm;    // dense output, B x width
    Eigen::MatrixXd normalized;  // (x - mean)/sqrt(var+eps), B x width
    Eigen::VectorXd inv_std;     // per sample
    Eigen::MatrixXd post;        // relu(gain*normalized + shift)
  };
  std::vector<Hidden> hidden;
  Eigen::MatrixXd output;  // B x out
};

// Single-sample layer-norm forward (the batched path inlines the same
// arithmetic row-wise).
Eigen::VectorXd norm_forward(const NormLayer& layer, const Eigen::VectorXd& x);

Eigen::MatrixXd mlp_forward_batch(const MlpSpec& spec, const MlpParams& params,
                                  const Eigen::MatrixXd& inputs,
                                  ForwardCache* cache = nullptr);

Eigen::VectorXd mlp_forward(const MlpSpec& spec, const MlpParams& params,
                            const Eigen::VectorXd& input,
                            ForwardCache* cache = nullptr);

// Exact reverse-mode gradients of mlp_forward_batch. upstream is B x out.
// Fills grads (accumulating nothing; overwrites) and returns d(loss)/d(input)
// as B x in. The cache must come from a forward call with matching shapes.
Eigen::MatrixXd mlp_backward(const MlpSpec& spec, const MlpParams& params,
                             const ForwardCache& cache,
                             const Eigen::MatrixXd& upstream,
                             GradientSet& grads);

// Enumerates tensors with stable names ("hidden0.weight", "norm0.gain",
// "output.bias", ...) in a fixed order; used by the checkpoint codec and
// anything that needs a flat view.
struct NamedTensor {
  std::string name;
  Eigen::MatrixXd* matrix = nullptr;  // exactly one of matrix/vector set
  Eigen::VectorXd* vector = nullptr;
};
std::vector<NamedTensor> named_tensors(MlpParams& params);

}  // namespace esdrl::net
