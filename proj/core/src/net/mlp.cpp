#include "esdrl/net/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace esdrl::net {

void MlpSpec::validate() const {
  if (input_dim < 1 || output_dim < 1) {
    throw std::invalid_argument("MlpSpec: input/output dims must be >= 1");
  }
  for (int h : hidden_dims) {
    if (h < 1) throw std::invalid_argument("MlpSpec: hidden dims must be >= 1");
  }
}

MlpSpec MlpSpec::actor(int state_dim, int action_dim) {
  return MlpSpec{state_dim, {256, 256}, action_dim, OutputHead::kTanh};
}

MlpSpec MlpSpec::critic(int state_dim, int action_dim) {
  return MlpSpec{state_dim + action_dim, {256, 256}, 1, OutputHead::kLinear};
}

bool MlpParams::shape_congruent(const MlpParams& other) const {
  if (dense.size() != other.dense.size() || norm.size() != other.norm.size())
    return false;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i].weights.rows() != other.dense[i].weights.rows() ||
        dense[i].weights.cols() != other.dense[i].weights.cols() ||
        dense[i].biases.size() != other.dense[i].biases.size())
      return false;
  }
  for (std::size_t i = 0; i < norm.size(); ++i) {
    if (norm[i].gain.size() != other.norm[i].gain.size() ||
        norm[i].shift.size() != other.norm[i].shift.size())
      return false;
  }
  return true;
}

bool MlpParams::all_finite() const {
  for (const auto& d : dense) {
    if (!d.weights.allFinite() || !d.biases.allFinite()) return false;
  }
  for (const auto& n : norm) {
    if (!n.gain.allFinite() || !n.shift.allFinite()) return false;
  }
  return true;
}

MlpParams zeros_like(const MlpSpec& spec) {
  spec.validate();
  MlpParams p;
  int in = spec.input_dim;
  for (int width : spec.hidden_dims) {
    p.dense.push_back({Eigen::MatrixXd::Zero(width, in),
                       Eigen::VectorXd::Zero(width)});
    p.norm.push_back({Eigen::VectorXd::Zero(width),
                      Eigen::VectorXd::Zero(width), 1e-5});
    in = width;
  }
  p.dense.push_back({Eigen::MatrixXd::Zero(spec.output_dim, in),
                     Eigen::VectorXd::Zero(spec.output_dim)});
  return p;
}

MlpParams init_params(const MlpSpec& spec, Rng& rng) {
  MlpParams p = zeros_like(spec);
  const std::size_t n_layers = p.dense.size();
  for (std::size_t l = 0; l < n_layers; ++l) {
    auto& layer = p.dense[l];
    const double fan_in = static_cast<double>(layer.weights.cols());
    const double bound =
        (l + 1 == n_layers) ? 3e-3 : 1.0 / std::sqrt(fan_in);
    for (Eigen::Index j = 0; j < layer.weights.size(); ++j) {
      layer.weights.data()[j] = rng.uniform(-bound, bound);
    }
    for (Eigen::Index j = 0; j < layer.biases.size(); ++j) {
      layer.biases[j] = rng.uniform(-bound, bound);
    }
  }
  for (auto& n : p.norm) {
    n.gain.setOnes();
    n.shift.setZero();
  }
  return p;
}

Eigen::VectorXd norm_forward(const NormLayer& layer, const Eigen::VectorXd& x) {
  if (x.size() != layer.gain.size()) {
    throw std::invalid_argument("norm_forward: width mismatch");
  }
  const double n = static_cast<double>(x.size());
  const double mean = x.mean();
  const double var = (x.array() - mean).square().sum() / n;
  const double inv_std = 1.0 / std::sqrt(var + layer.epsilon);
  return (layer.gain.array() * ((x.array() - mean) * inv_std) +
          layer.shift.array())
      .matrix();
}

Eigen::MatrixXd mlp_forward_batch(const MlpSpec& spec, const MlpParams& params,
                                  const Eigen::MatrixXd& inputs,
                                  ForwardCache* cache) {
  if (inputs.cols() != spec.input_dim) {
    throw std::invalid_argument("mlp_forward: input dim mismatch");
  }
  if (params.dense.size() != static_cast<std::size_t>(spec.layer_count()) ||
      params.norm.size() != spec.hidden_dims.size()) {
    throw std::invalid_argument("mlp_forward: params do not match spec");
  }
  if (cache) {
    cache->input = inputs;
    cache->hidden.resize(spec.hidden_dims.size());
  }

  Eigen::MatrixXd x = inputs;
  for (std::size_t l = 0; l < spec.hidden_dims.size(); ++l) {
    const auto& d = params.dense[l];
    const auto& nl = params.norm[l];
    Eigen::MatrixXd z =
        (x * d.weights.transpose()).rowwise() + d.biases.transpose();

    const double width = static_cast<double>(z.cols());
    Eigen::VectorXd mean = z.rowwise().mean();
    Eigen::MatrixXd centered = z.colwise() - mean;
    Eigen::VectorXd inv_std =
        ((centered.array().square().rowwise().sum() / width) + nl.epsilon)
            .sqrt()
            .inverse()
            .matrix();
    Eigen::MatrixXd xhat = centered.array().colwise() * inv_std.array();
    Eigen::MatrixXd post =
        ((xhat.array().rowwise() * nl.gain.transpose().array()).rowwise() +
         nl.shift.transpose().array())
            .max(0.0)
            .matrix();

    if (cache) {
      auto& h = (*cache).hidden[l];
      h.pre_norm = std::move(z);
      h.normalized = std::move(xhat);
      h.inv_std = std::move(inv_std);
      h.post = post;
    }
    x = std::move(post);
  }

  const auto& out = params.dense.back();
  Eigen::MatrixXd y =
      (x * out.weights.transpose()).rowwise() + out.biases.transpose();
  if (spec.output_head == OutputHead::kTanh) {
    y = y.array().tanh().matrix();
  }
  if (cache) cache->output = y;
  return y;
}

Eigen::VectorXd mlp_forward(const MlpSpec& spec, const MlpParams& params,
                            const Eigen::VectorXd& input, ForwardCache* cache) {
  return mlp_forward_batch(spec, params, input.transpose(), cache)
      .row(0)
      .transpose();
}

Eigen::MatrixXd mlp_backward(const MlpSpec& spec, const MlpParams& params,
                             const ForwardCache& cache,
                             const Eigen::MatrixXd& upstream,
                             GradientSet& grads) {
  const std::size_t n_hidden = spec.hidden_dims.size();
  if (cache.hidden.size() != n_hidden ||
      cache.input.cols() != spec.input_dim ||
      upstream.rows() != cache.input.rows() ||
      upstream.cols() != spec.output_dim) {
    throw std::invalid_argument("mlp_backward: stale or mismatched cache");
  }
  grads = zeros_like(spec);

  // Output head.
  Eigen::MatrixXd dy = upstream;
  if (spec.output_head == OutputHead::kTanh) {
    dy = dy.array() * (1.0 - cache.output.array().square());
  }
  const Eigen::MatrixXd& last_post =
      n_hidden > 0 ? cache.hidden.back().post : cache.input;
  grads.dense.back().weights.noalias() = dy.transpose() * last_post;
  grads.dense.back().biases = dy.colwise().sum().transpose();
  Eigen::MatrixXd dx = dy * params.dense.back().weights;

  for (std::size_t li = n_hidden; li-- > 0;) {
    const auto& h = cache.hidden[li];
    const auto& nl = params.norm[li];
    const double width = static_cast<double>(h.pre_norm.cols());

    // Through ReLU.
    Eigen::MatrixXd d_post =
        (h.post.array() > 0.0).cast<double>() * dx.array();

    // Through the affine part of layer norm.
    grads.norm[li].gain =
        (d_post.array() * h.normalized.array()).colwise().sum().transpose();
    grads.norm[li].shift = d_post.colwise().sum().transpose();
    Eigen::MatrixXd d_xhat =
        d_post.array().rowwise() * nl.gain.transpose().array();

    // Through normalization: for each row,
    // dz = inv_std * (d_xhat - mean(d_xhat) - xhat * mean(d_xhat .* xhat)).
    Eigen::VectorXd mean_dxhat = d_xhat.rowwise().sum() / width;
    Eigen::VectorXd mean_dxhat_xhat =
        (d_xhat.array() * h.normalized.array()).rowwise().sum() / width;
    Eigen::MatrixXd dz =
        ((d_xhat.colwise() - mean_dxhat).array() -
         (h.normalized.array().colwise() * mean_dxhat_xhat.array()))
            .colwise() *
        h.inv_std.array();

    const Eigen::MatrixXd& below =
        li > 0 ? cache.hidden[li - 1].post : cache.input;
    grads.dense[li].weights.noalias() = dz.transpose() * below;
    grads.dense[li].biases = dz.colwise().sum().transpose();
    dx.noalias() = dz * params.dense[li].weights;
  }
  return dx;
}

std::vector<NamedTensor> named_tensors(MlpParams& params) {
  std::vector<NamedTensor> out;
  const std::size_t n_layers = params.dense.size();
  for (std::size_t l = 0; l + 1 < n_layers; ++l) {
    const std::string base = "hidden" + std::to_string(l);
    out.push_back({base + ".weight", &params.dense[l].weights, nullptr});
    out.push_back({base + ".bias", nullptr, &params.dense[l].biases});
    const std::string nbase = "norm" + std::to_string(l);
    out.push_back({nbase + ".gain", nullptr, &params.norm[l].gain});
    out.push_back({nbase + ".shift", nullptr, &params.norm[l].shift});
  }
  out.push_back({"output.weight", &params.dense.back().weights, nullptr});
  out.push_back({"output.bias", nullptr, &params.dense.back().biases});
  return out;
}

}  // namespace esdrl::net
