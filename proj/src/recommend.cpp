#include "seedsynth/recommend.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "seedsynth/partition.hpp"
#include "seedsynth/rng.hpp"

namespace seedsynth {

DatasetReport generate_dataset(const std::vector<Circuit>& circuits,
                               const std::string& family,
                               const TemplateCatalog& catalog,
                               const SearchConfig& synth_cfg,
                               MetricsContext* metrics) {
  DatasetReport report;
  const std::size_t w = catalog.n_qubits();
  for (const Circuit& c : circuits) {
    const PartitionedCircuit parts = partition(c, w);
    for (const Block& b : parts.blocks) {
      ++report.blocks_total;
      if (b.width() != w) {
        ++report.blocks_skipped_width;
        continue;
      }
      const UnitaryMatrix u = block_unitary(b);
      try {
        const SynthesisResult r = synthesize(u, catalog, synth_cfg, metrics);
        LabeledUnitary sample;
        sample.features = feature_vector(canonicalize(u));
        sample.template_id = r.template_id;
        sample.topology_tag = catalog.at(r.template_id).first_topology;
        sample.family = family;
        sample.circuit_width = c.n_qubits();
        report.samples.push_back(std::move(sample));
      } catch (const NoSolutionError&) {
        ++report.blocks_failed;
      }
    }
  }
  return report;
}

Recommender::Recommender(std::size_t feature_size, std::size_t n_topologies,
                         std::size_t catalog_size, std::uint64_t init_seed)
    : feature_size_(feature_size),
      n_topologies_(n_topologies),
      catalog_size_(catalog_size),
      init_seed_(init_seed),
      net_({feature_size + n_topologies, 64, 32, 64, catalog_size},
           init_seed) {}

std::vector<double> Recommender::tagged_input(
    const std::vector<double>& features, std::size_t tag) const {
  if (features.size() != feature_size_) {
    throw std::invalid_argument("feature vector size mismatch");
  }
  if (tag >= n_topologies_) {
    throw std::invalid_argument("topology tag out of range");
  }
  std::vector<double> input = features;
  input.resize(feature_size_ + n_topologies_, 0.0);
  input[feature_size_ + tag] = 1.0;
  return input;
}

std::vector<double> Recommender::pretrain_denoise(
    const std::vector<LabeledUnitary>& data, const TrainConfig& cfg) {
  if (data.empty()) throw std::invalid_argument("pretraining needs data");
  const std::size_t in = feature_size_ + n_topologies_;
  Mlp autoencoder({in, 64, 32, 64, in}, init_seed_ ^ 0xae);
  // Encoder layers start from the deployed network so repeated pretraining
  // stays deterministic with respect to init_seed_.
  autoencoder.weights()[0] = net_.weights()[0];
  autoencoder.weights()[1] = net_.weights()[1];
  autoencoder.biases()[0] = net_.biases()[0];
  autoencoder.biases()[1] = net_.biases()[1];

  MlpTrainer trainer(autoencoder);
  Rng rng(cfg.rng_seed, 0x70726574);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> epoch_losses;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      trainer.zero_gradients();
      const double scale = 1.0 / static_cast<double>(end - start);
      for (std::size_t i = start; i < end; ++i) {
        const LabeledUnitary& s = data[order[i]];
        std::vector<double> clean = tagged_input(s.features, s.topology_tag);
        std::vector<double> noisy = clean;
        for (std::size_t f = 0; f < feature_size_; ++f) {
          noisy[f] += cfg.noise_std * rng.normal();
        }
        loss_sum += trainer.accumulate_mse(noisy, clean, scale);
      }
      trainer.apply_sgd(cfg.learning_rate);
    }
    epoch_losses.push_back(loss_sum / static_cast<double>(data.size()));
  }

  net_.weights()[0] = autoencoder.weights()[0];
  net_.weights()[1] = autoencoder.weights()[1];
  net_.biases()[0] = autoencoder.biases()[0];
  net_.biases()[1] = autoencoder.biases()[1];
  return epoch_losses;
}

std::vector<double> Recommender::finetune(
    const std::vector<LabeledUnitary>& data, const TrainConfig& cfg) {
  if (data.empty()) throw std::invalid_argument("finetuning needs data");
  for (const LabeledUnitary& s : data) {
    if (s.template_id >= catalog_size_) {
      throw std::invalid_argument("label outside the catalog");
    }
  }
  MlpTrainer trainer(net_);
  Rng rng(cfg.rng_seed, 0x66696e65);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> epoch_losses;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      trainer.zero_gradients();
      const double scale = 1.0 / static_cast<double>(end - start);
      for (std::size_t i = start; i < end; ++i) {
        const LabeledUnitary& s = data[order[i]];
        const std::vector<double> input =
            tagged_input(s.features, s.topology_tag);
        loss_sum +=
            trainer.accumulate_cross_entropy(input, s.template_id, scale);
      }
      trainer.apply_sgd(cfg.learning_rate);
    }
    epoch_losses.push_back(loss_sum / static_cast<double>(data.size()));
    if (!std::isfinite(epoch_losses.back())) {
      throw std::runtime_error("training loss diverged");
    }
  }
  trained_ = true;
  return epoch_losses;
}

std::vector<double> Recommender::scores(const std::vector<double>& features,
                                        std::size_t topology_tag) const {
  if (!trained_) {
    throw std::logic_error("recommender has not been finetuned");
  }
  const std::vector<double> logits =
      net_.forward(tagged_input(features, topology_tag));
  return softmax(logits);
}

std::vector<double> Recommender::scores(const LabeledUnitary& sample) const {
  return scores(sample.features, sample.topology_tag);
}

std::vector<std::size_t> Recommender::recommend_seeds(
    const TemplateCatalog& catalog, const UnitaryMatrix& u,
    std::size_t topology_tag, std::size_t k) const {
  if (catalog.size() != catalog_size_) {
    throw std::invalid_argument("catalog size does not match the model");
  }
  const std::vector<double> features = feature_vector(canonicalize(u));
  const std::vector<double> probs = scores(features, topology_tag);

  std::vector<std::size_t> ids = catalog.ids_for_topology(topology_tag);
  std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
    if (probs[a] != probs[b]) return probs[a] > probs[b];
    return a < b;
  });
  if (ids.size() > k) ids.resize(k);
  return ids;
}

void Recommender::save(std::ostream& os) const {
  nlohmann::json j;
  j["format"] = "seedsynth-recommender";
  j["version"] = 1;
  j["feature_size"] = feature_size_;
  j["n_topologies"] = n_topologies_;
  j["catalog_size"] = catalog_size_;
  j["init_seed"] = init_seed_;
  j["trained"] = trained_;
  j["layer_sizes"] = net_.layer_sizes();
  j["weights"] = net_.weights();
  j["biases"] = net_.biases();
  os << j.dump() << '\n';
}

Recommender Recommender::load(std::istream& is) {
  nlohmann::json j;
  is >> j;
  if (j.value("format", "") != "seedsynth-recommender" ||
      j.value("version", 0) != 1) {
    throw std::runtime_error("unrecognized recommender file");
  }
  Recommender r(j.at("feature_size").get<std::size_t>(),
                j.at("n_topologies").get<std::size_t>(),
                j.at("catalog_size").get<std::size_t>(),
                j.at("init_seed").get<std::uint64_t>());
  const auto sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
  if (sizes != r.net_.layer_sizes()) {
    throw std::runtime_error("recommender layer sizes are inconsistent");
  }
  r.net_.weights() = j.at("weights").get<std::vector<std::vector<double>>>();
  r.net_.biases() = j.at("biases").get<std::vector<std::vector<double>>>();
  r.trained_ = j.at("trained").get<bool>();
  return r;
}

void Recommender::save_file(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  save(f);
}

Recommender Recommender::load_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return load(f);
}

void write_dataset(std::ostream& os, const std::vector<LabeledUnitary>& data,
                   std::size_t n_topologies) {
  for (const LabeledUnitary& s : data) {
    std::vector<double> features = s.features;
    features.resize(s.features.size() + n_topologies, 0.0);
    features[s.features.size() + s.topology_tag] = 1.0;
    nlohmann::json j{{"features", features},
                     {"template_id", s.template_id},
                     {"topology_tag", s.topology_tag},
                     {"family", s.family},
                     {"width", s.circuit_width}};
    os << j.dump() << '\n';
  }
}

std::vector<LabeledUnitary> read_dataset(std::istream& is,
                                         std::size_t n_topologies) {
  std::vector<LabeledUnitary> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    LabeledUnitary s;
    auto features = j.at("features").get<std::vector<double>>();
    if (features.size() <= n_topologies) {
      throw std::runtime_error("dataset features shorter than the tag block");
    }
    features.resize(features.size() - n_topologies);
    s.features = std::move(features);
    s.template_id = j.at("template_id").get<std::size_t>();
    s.topology_tag = j.at("topology_tag").get<std::size_t>();
    s.family = j.at("family").get<std::string>();
    s.circuit_width = j.at("width").get<std::size_t>();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace seedsynth
