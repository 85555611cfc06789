#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace seedsynth {

// Fully connected network with tanh hidden activations and identity output;
// softmax lives in the loss and in inference. Small enough that plain
// double-precision minibatch SGD is the whole training story.
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::vector<std::size_t> layer_sizes, std::uint64_t init_seed);

  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  std::size_t input_size() const { return sizes_.front(); }
  std::size_t output_size() const { return sizes_.back(); }

  std::vector<double> forward(std::span<const double> input) const;

  // Weights of layer l as a row-major (sizes[l+1] x sizes[l]) matrix.
  std::vector<std::vector<double>>& weights() { return weights_; }
  std::vector<std::vector<double>>& biases() { return biases_; }
  const std::vector<std::vector<double>>& weights() const { return weights_; }
  const std::vector<std::vector<double>>& biases() const { return biases_; }

  void save(std::ostream& os) const;
  static Mlp load(std::istream& is);

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<double>> weights_;
  std::vector<std::vector<double>> biases_;

  friend class MlpTrainer;
};

std::vector<double> softmax(std::span<const double> logits);

struct TrainConfig {
  std::size_t epochs = 200;
  std::size_t batch_size = 64;
  double learning_rate = 0.05;
  double noise_std = 0.05;  // pretraining input noise
  std::uint64_t rng_seed = 7;
  double holdout_fraction = 0.2;
};

// Gradient machinery shared by the two training phases. Exposed so tests
// can finite-difference-check the backward pass.
class MlpTrainer {
 public:
  explicit MlpTrainer(Mlp& model);

  // Mean squared error of forward(input) against target; accumulates
  // parameter gradients scaled by `scale`.
  double accumulate_mse(std::span<const double> input,
                        std::span<const double> target, double scale);

  // Cross-entropy of softmax(forward(input)) against the label.
  double accumulate_cross_entropy(std::span<const double> input,
                                  std::size_t label, double scale);

  void zero_gradients();
  void apply_sgd(double learning_rate);

  std::vector<std::vector<double>>& weight_grads() { return weight_grads_; }
  std::vector<std::vector<double>>& bias_grads() { return bias_grads_; }

 private:
  const std::vector<double>& forward_retained(std::span<const double> input);
  void backward(std::span<const double> output_grad);

  Mlp& model_;
  std::vector<std::vector<double>> weight_grads_;
  std::vector<std::vector<double>> bias_grads_;
  std::vector<std::vector<double>> activations_;
  std::vector<std::vector<double>> deltas_;
};

}  // namespace seedsynth
