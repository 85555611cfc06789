#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "seedsynth/circuit.hpp"

namespace seedsynth {

using Edge = std::pair<std::size_t, std::size_t>;  // normalized (lo, hi)

// Parameter-free circuit skeleton: an initial U3 on every qubit, then per
// CNOT a (CNOT, U3, U3) block on the touched qubits. CNOT control is the
// lower qubit index of the edge.
struct Template {
  std::size_t id = 0;
  std::vector<Edge> cnot_edges;
  Circuit skeleton{1};
  std::uint32_t topology_mask = 0;  // bit t set: fits topology t
  std::size_t first_topology = 0;

  std::size_t cnot_count() const { return cnot_edges.size(); }
  bool fits_topology(std::size_t tag) const {
    return (topology_mask >> tag) & 1u;
  }
};

// Breadth-first enumeration of the circuit tree up to K CNOTs. Ids are
// dense, depth-major, the 0-CNOT root is id 0; within a depth level,
// topologies in declared order and edge sequences lexicographically, with
// duplicate skeletons across topologies kept once.
class TemplateCatalog {
 public:
  TemplateCatalog(std::size_t n_qubits, std::size_t k,
                  std::vector<QubitTopology> topologies,
                  std::size_t consecutive_limit = 3);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t k() const { return k_; }
  std::size_t size() const { return templates_.size(); }
  const std::vector<QubitTopology>& topologies() const { return topologies_; }
  const Template& at(std::size_t id) const;
  const std::vector<Template>& templates() const { return templates_; }

  const std::vector<std::size_t>& children(std::size_t id) const;
  std::optional<std::size_t> parent(std::size_t id) const;

  // Ids whose edge set fits the given topology tag.
  std::vector<std::size_t> ids_for_topology(std::size_t tag) const;

  std::optional<std::size_t> find(const std::vector<Edge>& edges) const;

  // JSON lines, one record {id, topology, edges, cnot_count} per template;
  // the label-space contract for recommender datasets.
  void export_jsonl(std::ostream& os) const;

 private:
  std::size_t n_qubits_;
  std::size_t k_;
  std::vector<QubitTopology> topologies_;
  std::vector<Template> templates_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::optional<std::size_t>> parents_;
  std::map<std::vector<Edge>, std::size_t> by_edges_;
};

// Default catalog used throughout: the three vertex labelings of the
// 3-qubit line (0-1-2, 0-2-1, 1-0-2).
std::vector<QubitTopology> default_line_topologies_3q();

// Catalog for a block of the given width: K = min(max useful CNOTs, 8) on
// the line topologies (only labeling 0-1 for width 2, root only for 1).
TemplateCatalog catalog_for_width(std::size_t n_qubits, std::size_t k = 8);

// Frequency table over template ids, sorted by count descending then id.
std::vector<std::pair<std::size_t, std::size_t>> template_histogram(
    const std::vector<std::pair<std::size_t, std::size_t>>& assignments);

}  // namespace seedsynth
