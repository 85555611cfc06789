#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "seedsynth/canonical.hpp"
#include "seedsynth/mlp.hpp"
#include "seedsynth/synth.hpp"

namespace seedsynth {

// One training sample: canonical features of a partitioned block unitary
// paired with the template that synthesis found for it.
struct LabeledUnitary {
  std::vector<double> features;  // 2*N^2 canonical features, no tag
  std::size_t template_id = 0;
  std::size_t topology_tag = 0;
  std::string family;
  std::size_t circuit_width = 0;
};

struct DatasetReport {
  std::vector<LabeledUnitary> samples;
  std::size_t blocks_total = 0;
  std::size_t blocks_skipped_width = 0;  // narrower than the catalog width
  std::size_t blocks_failed = 0;         // synthesis found no template
};

// Partitions each circuit at w = catalog width, canonicalizes every block
// unitary and labels it with root-start synthesis. Blocks that fail to
// synthesize (or are too narrow for the catalog) are skipped and counted.
DatasetReport generate_dataset(const std::vector<Circuit>& circuits,
                               const std::string& family,
                               const TemplateCatalog& catalog,
                               const SearchConfig& synth_cfg,
                               MetricsContext* metrics = nullptr);

// Seed recommender: encoder layers [in, 64, 32], template head [32, 64, K].
// Inputs are the 2N^2 canonical features with a one-hot topology tag
// appended; outputs are masked to templates that fit the requested topology.
class Recommender {
 public:
  Recommender() = default;
  Recommender(std::size_t feature_size, std::size_t n_topologies,
              std::size_t catalog_size, std::uint64_t init_seed);

  // Denoising-autoencoder pretraining of the encoder: Gaussian noise on the
  // feature part of the input, MSE reconstruction of the clean input.
  // Returns per-epoch mean losses.
  std::vector<double> pretrain_denoise(const std::vector<LabeledUnitary>& data,
                                       const TrainConfig& cfg);

  // Cross-entropy training of encoder + head on template labels.
  std::vector<double> finetune(const std::vector<LabeledUnitary>& data,
                               const TrainConfig& cfg);

  std::vector<double> scores(const LabeledUnitary& sample) const;
  std::vector<double> scores(const std::vector<double>& features,
                             std::size_t topology_tag) const;

  // Top-k template ids for the unitary, restricted to templates fitting the
  // topology tag. Requires a finetuned model.
  std::vector<std::size_t> recommend_seeds(const TemplateCatalog& catalog,
                                           const UnitaryMatrix& u,
                                           std::size_t topology_tag,
                                           std::size_t k = 3) const;

  bool trained() const { return trained_; }
  std::size_t feature_size() const { return feature_size_; }
  std::size_t n_topologies() const { return n_topologies_; }
  std::size_t catalog_size() const { return catalog_size_; }
  const Mlp& network() const { return net_; }
  Mlp& network() { return net_; }

  void save(std::ostream& os) const;
  static Recommender load(std::istream& is);
  void save_file(const std::string& path) const;
  static Recommender load_file(const std::string& path);

 private:
  std::vector<double> tagged_input(const std::vector<double>& features,
                                   std::size_t tag) const;

  std::size_t feature_size_ = 0;
  std::size_t n_topologies_ = 0;
  std::size_t catalog_size_ = 0;
  std::uint64_t init_seed_ = 0;
  // [in, 64, 32, 64, catalog]: encoder to the 32-wide bottleneck, then the
  // template selection head. Pretraining trains [in, 64, 32, 64, in] and
  // copies the encoder layers over.
  Mlp net_;
  bool trained_ = false;
};

// JSON lines: {features, template_id, topology_tag, family, width} where
// features carries the one-hot topology tag appended.
void write_dataset(std::ostream& os, const std::vector<LabeledUnitary>& data,
                   std::size_t n_topologies);
std::vector<LabeledUnitary> read_dataset(std::istream& is,
                                         std::size_t n_topologies);

}  // namespace seedsynth
