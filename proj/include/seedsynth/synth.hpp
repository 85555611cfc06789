#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "seedsynth/instantiate.hpp"
#include "seedsynth/templates.hpp"

namespace seedsynth {

enum class SynthStrategy { root, seeded, random_seeded };

const char* strategy_name(SynthStrategy s);

struct SearchConfig {
  InstantiationConfig instantiation;
  double depth_weight = 0.01;    // CNOT-count penalty in the node priority
  std::size_t max_cnots = 0;     // 0: use the catalog's K
  std::size_t frontier_limit = 4096;
};

struct SynthesisResult {
  Circuit circuit{1};
  std::size_t template_id = 0;
  double cost = 0.0;
  std::uint64_t instantiation_calls = 0;
  std::size_t nodes_visited = 0;  // frontier expansions
  SynthStrategy strategy = SynthStrategy::root;
};

// Search ran out of candidates below the CNOT cap. Carries the best
// (lowest cost) instantiated node seen.
class NoSolutionError : public std::runtime_error {
 public:
  NoSolutionError(std::string message, SynthesisResult best)
      : std::runtime_error(std::move(message)), best(std::move(best)) {}

  SynthesisResult best;
};

// Best-first search from the tree root. Nodes are instantiated when
// generated and ordered by cost + depth_weight * cnot_count (ties: fewer
// CNOTs, then lower id); the first converging node is returned.
SynthesisResult synthesize(const UnitaryMatrix& target,
                           const TemplateCatalog& catalog,
                           const SearchConfig& cfg,
                           MetricsContext* metrics = nullptr);

// Same search started from the given seed templates, with both child-append
// and parent-remove moves. Seeds are instantiated in list order and any
// converging seed returns immediately.
SynthesisResult seeded_synthesize(const UnitaryMatrix& target,
                                  const TemplateCatalog& catalog,
                                  const std::vector<std::size_t>& seeds,
                                  const SearchConfig& cfg,
                                  MetricsContext* metrics = nullptr,
                                  SynthStrategy label = SynthStrategy::seeded);

// Uniform sample of `count` distinct template ids; deterministic per seed.
std::vector<std::size_t> random_seeds(const TemplateCatalog& catalog,
                                      std::size_t count,
                                      std::uint64_t rng_seed);

}  // namespace seedsynth
