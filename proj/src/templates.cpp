#include "seedsynth/templates.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "seedsynth/linalg.hpp"

namespace seedsynth {

namespace {

Circuit build_skeleton(std::size_t n_qubits, const std::vector<Edge>& edges) {
  Circuit c(n_qubits);
  for (std::size_t q = 0; q < n_qubits; ++q) c.add_u3(q);
  for (const Edge& e : edges) {
    c.add_cnot(e.first, e.second);
    c.add_u3(e.first);
    c.add_u3(e.second);
  }
  return c;
}

bool run_limit_ok(const std::vector<Edge>& edges, std::size_t limit) {
  std::size_t run = 0;
  const Edge* prev = nullptr;
  for (const Edge& e : edges) {
    run = (prev && *prev == e) ? run + 1 : 1;
    if (run > limit) return false;
    prev = &e;
  }
  return true;
}

}  // namespace

TemplateCatalog::TemplateCatalog(std::size_t n_qubits, std::size_t k,
                                 std::vector<QubitTopology> topologies,
                                 std::size_t consecutive_limit)
    : n_qubits_(n_qubits), k_(k), topologies_(std::move(topologies)) {
  if (topologies_.empty()) {
    throw std::invalid_argument("catalog needs at least one topology");
  }
  if (topologies_.size() > 32) {
    throw std::invalid_argument("too many topologies for the mask width");
  }
  for (const QubitTopology& t : topologies_) {
    if (t.n_qubits() > n_qubits_) {
      throw std::invalid_argument("topology wider than catalog width");
    }
  }

  auto add_template = [&](std::vector<Edge> edges) {
    Template t;
    t.id = templates_.size();
    t.skeleton = build_skeleton(n_qubits_, edges);
    for (std::size_t ti = 0; ti < topologies_.size(); ++ti) {
      const bool fits = std::all_of(
          edges.begin(), edges.end(), [&](const Edge& e) {
            return topologies_[ti].has_edge(e.first, e.second);
          });
      if (fits) t.topology_mask |= (1u << ti);
    }
    t.first_topology = 0;
    while (((t.topology_mask >> t.first_topology) & 1u) == 0 &&
           t.first_topology + 1 < topologies_.size()) {
      ++t.first_topology;
    }
    t.cnot_edges = std::move(edges);
    by_edges_.emplace(t.cnot_edges, t.id);
    templates_.push_back(std::move(t));
  };

  add_template({});  // root

  std::size_t level_begin = 0;
  std::size_t level_end = 1;
  for (std::size_t depth = 1; depth <= k_; ++depth) {
    // Candidate children of the previous level, grouped per topology in
    // declared order and lexicographic within, deduplicated across
    // topologies by edge sequence.
    std::vector<std::vector<Edge>> level;
    for (std::size_t ti = 0; ti < topologies_.size(); ++ti) {
      std::vector<Edge> sorted_edges(topologies_[ti].edges().begin(),
                                     topologies_[ti].edges().end());
      std::vector<std::vector<Edge>> mine;
      for (std::size_t id = level_begin; id < level_end; ++id) {
        if (!templates_[id].fits_topology(ti)) continue;
        for (const Edge& e : sorted_edges) {
          std::vector<Edge> child = templates_[id].cnot_edges;
          child.push_back(e);
          if (!run_limit_ok(child, consecutive_limit)) continue;
          mine.push_back(std::move(child));
        }
      }
      std::sort(mine.begin(), mine.end());
      for (auto& seq : mine) {
        if (by_edges_.count(seq)) continue;
        if (std::any_of(level.begin(), level.end(),
                        [&](const auto& s) { return s == seq; })) {
          continue;
        }
        level.push_back(std::move(seq));
      }
    }
    for (auto& seq : level) add_template(std::move(seq));
    level_begin = level_end;
    level_end = templates_.size();
    if (level_begin == level_end) break;  // no templates at this depth
  }

  parents_.resize(templates_.size());
  children_.resize(templates_.size());
  for (const Template& t : templates_) {
    if (t.cnot_edges.empty()) {
      parents_[t.id] = std::nullopt;
      continue;
    }
    std::vector<Edge> prefix(t.cnot_edges.begin(), t.cnot_edges.end() - 1);
    const auto it = by_edges_.find(prefix);
    if (it == by_edges_.end()) {
      throw std::logic_error("template parent missing from catalog");
    }
    parents_[t.id] = it->second;
    children_[it->second].push_back(t.id);
  }
  for (auto& kids : children_) std::sort(kids.begin(), kids.end());
}

const Template& TemplateCatalog::at(std::size_t id) const {
  if (id >= templates_.size()) {
    throw std::out_of_range("unknown template id");
  }
  return templates_[id];
}

const std::vector<std::size_t>& TemplateCatalog::children(
    std::size_t id) const {
  if (id >= children_.size()) throw std::out_of_range("unknown template id");
  return children_[id];
}

std::optional<std::size_t> TemplateCatalog::parent(std::size_t id) const {
  if (id >= parents_.size()) throw std::out_of_range("unknown template id");
  return parents_[id];
}

std::vector<std::size_t> TemplateCatalog::ids_for_topology(
    std::size_t tag) const {
  std::vector<std::size_t> out;
  for (const Template& t : templates_) {
    if (t.fits_topology(tag)) out.push_back(t.id);
  }
  return out;
}

std::optional<std::size_t> TemplateCatalog::find(
    const std::vector<Edge>& edges) const {
  const auto it = by_edges_.find(edges);
  if (it == by_edges_.end()) return std::nullopt;
  return it->second;
}

void TemplateCatalog::export_jsonl(std::ostream& os) const {
  for (const Template& t : templates_) {
    os << "{\"id\":" << t.id << ",\"topology\":" << t.first_topology
       << ",\"edges\":[";
    for (std::size_t i = 0; i < t.cnot_edges.size(); ++i) {
      if (i) os << ',';
      os << '[' << t.cnot_edges[i].first << ',' << t.cnot_edges[i].second
         << ']';
    }
    os << "],\"cnot_count\":" << t.cnot_count() << "}\n";
  }
}

std::vector<QubitTopology> default_line_topologies_3q() {
  return {QubitTopology::line({0, 1, 2}), QubitTopology::line({0, 2, 1}),
          QubitTopology::line({1, 0, 2})};
}

TemplateCatalog catalog_for_width(std::size_t n_qubits, std::size_t k) {
  if (n_qubits == 1) {
    return TemplateCatalog(1, 0, {QubitTopology(1, {})});
  }
  if (n_qubits == 2) {
    return TemplateCatalog(2, std::min<std::size_t>(k, max_cnots(2)),
                           {QubitTopology::line({0, 1})});
  }
  if (n_qubits == 3) {
    return TemplateCatalog(3, k, default_line_topologies_3q());
  }
  throw std::invalid_argument("no default catalog beyond width 3");
}

std::vector<std::pair<std::size_t, std::size_t>> template_histogram(
    const std::vector<std::pair<std::size_t, std::size_t>>& assignments) {
  std::map<std::size_t, std::size_t> counts;
  for (const auto& [unitary_id, template_id] : assignments) {
    (void)unitary_id;
    ++counts[template_id];
  }
  std::vector<std::pair<std::size_t, std::size_t>> out(counts.begin(),
                                                       counts.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

}  // namespace seedsynth
