#include "seedsynth/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "seedsynth/kernels.hpp"
#include "seedsynth/rng.hpp"

namespace seedsynth {

Mlp::Mlp(std::vector<std::size_t> layer_sizes, std::uint64_t init_seed)
    : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) {
    throw std::invalid_argument("mlp needs at least input and output layers");
  }
  Rng rng(init_seed, 0x6d6c70);
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const std::size_t fan_in = sizes_[l];
    const std::size_t fan_out = sizes_[l + 1];
    const double scale = std::sqrt(1.0 / static_cast<double>(fan_in));
    std::vector<double> w(fan_out * fan_in);
    for (double& v : w) v = rng.normal() * scale;
    weights_.push_back(std::move(w));
    biases_.emplace_back(fan_out, 0.0);
  }
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  if (input.size() != input_size()) {
    throw std::invalid_argument("mlp input size mismatch");
  }
  std::vector<double> current(input.begin(), input.end());
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const std::size_t in = sizes_[l];
    const std::size_t out = sizes_[l + 1];
    std::vector<double> next(out);
    for (std::size_t r = 0; r < out; ++r) {
      next[r] = biases_[l][r] +
                kernels::dot(weights_[l].data() + r * in, current.data(), in);
    }
    if (l + 1 < weights_.size()) {
      for (double& v : next) v = std::tanh(v);
    }
    current = std::move(next);
  }
  return current;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.begin(), logits.end());
  const double peak = *std::max_element(out.begin(), out.end());
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - peak);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

void Mlp::save(std::ostream& os) const {
  nlohmann::json j;
  j["format"] = "seedsynth-mlp";
  j["version"] = 1;
  j["layer_sizes"] = sizes_;
  j["weights"] = weights_;
  j["biases"] = biases_;
  os << j.dump() << '\n';
}

Mlp Mlp::load(std::istream& is) {
  nlohmann::json j;
  is >> j;
  if (j.value("format", "") != "seedsynth-mlp" || j.value("version", 0) != 1) {
    throw std::runtime_error("unrecognized model file format");
  }
  Mlp m;
  m.sizes_ = j.at("layer_sizes").get<std::vector<std::size_t>>();
  m.weights_ = j.at("weights").get<std::vector<std::vector<double>>>();
  m.biases_ = j.at("biases").get<std::vector<std::vector<double>>>();
  if (m.sizes_.size() < 2 || m.weights_.size() + 1 != m.sizes_.size() ||
      m.biases_.size() + 1 != m.sizes_.size()) {
    throw std::runtime_error("model file has inconsistent layer shapes");
  }
  for (std::size_t l = 0; l + 1 < m.sizes_.size(); ++l) {
    if (m.weights_[l].size() != m.sizes_[l] * m.sizes_[l + 1] ||
        m.biases_[l].size() != m.sizes_[l + 1]) {
      throw std::runtime_error("model file has inconsistent layer shapes");
    }
  }
  return m;
}

MlpTrainer::MlpTrainer(Mlp& model) : model_(model) {
  for (std::size_t l = 0; l + 1 < model_.sizes_.size(); ++l) {
    weight_grads_.emplace_back(model_.weights_[l].size(), 0.0);
    bias_grads_.emplace_back(model_.biases_[l].size(), 0.0);
  }
  for (std::size_t s : model_.sizes_) {
    activations_.emplace_back(s, 0.0);
    deltas_.emplace_back(s, 0.0);
  }
}

void MlpTrainer::zero_gradients() {
  for (auto& g : weight_grads_) std::fill(g.begin(), g.end(), 0.0);
  for (auto& g : bias_grads_) std::fill(g.begin(), g.end(), 0.0);
}

void MlpTrainer::apply_sgd(double learning_rate) {
  for (std::size_t l = 0; l < weight_grads_.size(); ++l) {
    kernels::axpy(-learning_rate, weight_grads_[l].data(),
                  model_.weights_[l].data(), weight_grads_[l].size());
    kernels::axpy(-learning_rate, bias_grads_[l].data(),
                  model_.biases_[l].data(), bias_grads_[l].size());
  }
}

const std::vector<double>& MlpTrainer::forward_retained(
    std::span<const double> input) {
  const auto& sizes = model_.sizes_;
  const std::size_t layers = model_.weights_.size();
  activations_[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = sizes[l];
    const std::size_t out = sizes[l + 1];
    for (std::size_t r = 0; r < out; ++r) {
      activations_[l + 1][r] =
          model_.biases_[l][r] + kernels::dot(model_.weights_[l].data() + r * in,
                                              activations_[l].data(), in);
    }
    if (l + 1 < layers) {
      for (double& v : activations_[l + 1]) v = std::tanh(v);
    }
  }
  return activations_[layers];
}

// Backpropagation of output_grad (d loss / d logits) through the
// activations retained by forward_retained.
void MlpTrainer::backward(std::span<const double> output_grad) {
  const auto& sizes = model_.sizes_;
  const std::size_t layers = model_.weights_.size();

  deltas_[layers].assign(output_grad.begin(), output_grad.end());
  for (std::size_t l = layers; l-- > 0;) {
    const std::size_t in = sizes[l];
    const std::size_t out = sizes[l + 1];
    // dW_r = delta_r * activation; db_r = delta_r; then propagate W^T delta.
    for (std::size_t r = 0; r < out; ++r) {
      const double d = deltas_[l + 1][r];
      if (d != 0.0) {
        kernels::axpy(d, activations_[l].data(),
                      weight_grads_[l].data() + r * in, in);
      }
      bias_grads_[l][r] += d;
    }
    if (l == 0) break;
    std::fill(deltas_[l].begin(), deltas_[l].end(), 0.0);
    for (std::size_t r = 0; r < out; ++r) {
      const double d = deltas_[l + 1][r];
      if (d != 0.0) {
        kernels::axpy(d, model_.weights_[l].data() + r * in, deltas_[l].data(),
                      in);
      }
    }
    for (std::size_t i = 0; i < in; ++i) {
      const double a = activations_[l][i];
      deltas_[l][i] *= 1.0 - a * a;  // tanh'
    }
  }
}

double MlpTrainer::accumulate_mse(std::span<const double> input,
                                  std::span<const double> target,
                                  double scale) {
  const std::vector<double>& out = forward_retained(input);
  if (target.size() != out.size()) {
    throw std::invalid_argument("mse target size mismatch");
  }
  std::vector<double> grad(out.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double e = out[i] - target[i];
    loss += e * e;
    grad[i] = 2.0 * e * scale / static_cast<double>(out.size());
  }
  loss /= static_cast<double>(out.size());
  backward(grad);
  return loss;
}

double MlpTrainer::accumulate_cross_entropy(std::span<const double> input,
                                            std::size_t label, double scale) {
  const std::vector<double>& logits = forward_retained(input);
  if (label >= logits.size()) {
    throw std::invalid_argument("label out of range");
  }
  std::vector<double> probs = softmax(logits);
  const double loss = -std::log(std::max(probs[label], 1e-300));
  std::vector<double>& grad = probs;  // d loss / d logits = probs - onehot
  grad[label] -= 1.0;
  for (double& v : grad) v *= scale;
  backward(grad);
  return loss;
}

}  // namespace seedsynth
