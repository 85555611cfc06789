#include "seedsynth/synth.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <set>
#include <unordered_set>

#include "seedsynth/linalg.hpp"
#include "seedsynth/rng.hpp"

namespace seedsynth {

const char* strategy_name(SynthStrategy s) {
  switch (s) {
    case SynthStrategy::root:
      return "root";
    case SynthStrategy::seeded:
      return "seeded";
    case SynthStrategy::random_seeded:
      return "random_seeded";
  }
  return "unknown";
}

namespace {

struct Node {
  double priority;
  std::size_t cnots;
  std::size_t id;
  double cost;
  std::vector<double> params;
};

// Total order: priority, then CNOT count, then template id. Parameters do
// not participate, and ids are unique in the frontier.
struct NodeLess {
  bool operator()(const Node& a, const Node& b) const {
    if (a.priority != b.priority) return a.priority < b.priority;
    if (a.cnots != b.cnots) return a.cnots < b.cnots;
    return a.id < b.id;
  }
};

SynthesisResult search(const UnitaryMatrix& target,
                       const TemplateCatalog& catalog,
                       const std::vector<std::size_t>& initial,
                       bool parent_moves, const SearchConfig& cfg,
                       MetricsContext* metrics, SynthStrategy label) {
  if (target.n_qubits() != catalog.n_qubits()) {
    throw std::invalid_argument("target width does not match catalog");
  }
  if (initial.empty()) {
    throw std::invalid_argument("search needs at least one start template");
  }
  const std::size_t cnot_cap =
      cfg.max_cnots == 0 ? catalog.k() : std::min(cfg.max_cnots, catalog.k());

  std::uint64_t calls = 0;
  std::size_t expansions = 0;
  std::set<Node, NodeLess> frontier;
  std::unordered_set<std::size_t> visited;

  SynthesisResult best;
  best.cost = std::numeric_limits<double>::infinity();
  best.strategy = label;

  auto make_result = [&](const Node& node) {
    SynthesisResult r;
    r.circuit = catalog.at(node.id).skeleton;
    r.circuit.set_params(node.params);
    r.template_id = node.id;
    r.cost = node.cost;
    r.instantiation_calls = calls;
    r.nodes_visited = expansions;
    r.strategy = label;
    return r;
  };

  // Instantiates one template; returns the node if it did not converge.
  auto probe = [&](std::size_t id) -> std::optional<Node> {
    const Template& tmpl = catalog.at(id);
    ++calls;
    const InstantiationResult inst =
        instantiate(target, tmpl, cfg.instantiation, metrics);
    Node node{inst.cost + cfg.depth_weight * tmpl.cnot_count(),
              tmpl.cnot_count(), id, inst.cost, inst.params};
    if (node.cost < best.cost) best = make_result(node);
    if (inst.converged) return std::nullopt;
    return node;
  };

  for (std::size_t id : initial) {
    if (!visited.insert(id).second) continue;
    auto node = probe(id);
    if (!node) return best;  // converged at a start template
    frontier.insert(std::move(*node));
  }

  while (!frontier.empty()) {
    Node current = *frontier.begin();
    frontier.erase(frontier.begin());
    ++expansions;

    // Parent (gate removal) first: an over-deep seed should discover the
    // shallower solution before a deeper child shadows it.
    std::vector<std::size_t> moves;
    if (parent_moves) {
      if (auto p = catalog.parent(current.id)) moves.push_back(*p);
    }
    if (current.cnots < cnot_cap) {
      const auto& kids = catalog.children(current.id);
      moves.insert(moves.end(), kids.begin(), kids.end());
    }

    for (std::size_t id : moves) {
      if (!visited.insert(id).second) continue;
      auto node = probe(id);
      if (!node) return best;
      frontier.insert(std::move(*node));
      while (frontier.size() > cfg.frontier_limit) {
        frontier.erase(std::prev(frontier.end()));
      }
    }
  }

  best.instantiation_calls = calls;
  best.nodes_visited = expansions;
  throw NoSolutionError(
      "synthesis frontier exhausted below " + std::to_string(cnot_cap) +
          " CNOTs (best cost " + std::to_string(best.cost) + ")",
      std::move(best));
}

}  // namespace

SynthesisResult synthesize(const UnitaryMatrix& target,
                           const TemplateCatalog& catalog,
                           const SearchConfig& cfg, MetricsContext* metrics) {
  return search(target, catalog, {0}, false, cfg, metrics,
                SynthStrategy::root);
}

SynthesisResult seeded_synthesize(const UnitaryMatrix& target,
                                  const TemplateCatalog& catalog,
                                  const std::vector<std::size_t>& seeds,
                                  const SearchConfig& cfg,
                                  MetricsContext* metrics,
                                  SynthStrategy label) {
  for (std::size_t id : seeds) {
    if (id >= catalog.size()) {
      throw std::invalid_argument("seed template id out of range");
    }
  }
  return search(target, catalog, seeds, true, cfg, metrics, label);
}

std::vector<std::size_t> random_seeds(const TemplateCatalog& catalog,
                                      std::size_t count,
                                      std::uint64_t rng_seed) {
  if (count < 1 || count > catalog.size()) {
    throw std::invalid_argument("seed count out of range");
  }
  std::vector<std::size_t> ids(catalog.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  Rng rng(rng_seed);
  // Partial Fisher-Yates: the first `count` entries become the sample.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.uniform_int(ids.size() - i);
    std::swap(ids[i], ids[j]);
  }
  ids.resize(count);
  return ids;
}

}  // namespace seedsynth
