#include "seedsynth/partition.hpp"

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "seedsynth/linalg.hpp"

namespace seedsynth {

namespace {

std::vector<std::size_t> gate_qubits(const GatePlacement& g) {
  if (g.kind == GateKind::u3) return {g.q0};
  return {g.q0, g.q1};
}

std::size_t local_index(const std::vector<std::size_t>& subset,
                        std::size_t global) {
  const auto it = std::lower_bound(subset.begin(), subset.end(), global);
  if (it == subset.end() || *it != global) {
    throw std::logic_error("qubit missing from block subset");
  }
  return static_cast<std::size_t>(it - subset.begin());
}

// Appends the slice [begin, end) of `src` to `dst`, remapping qubits.
void append_remapped(Circuit& dst, const Circuit& src, std::size_t begin,
                     std::size_t end,
                     const std::vector<std::size_t>& qubit_map) {
  for (std::size_t gi = begin; gi < end; ++gi) {
    const GatePlacement& g = src.gates()[gi];
    if (g.kind == GateKind::u3) {
      dst.add_u3(qubit_map[g.q0], src.params()[g.param_offset],
                 src.params()[g.param_offset + 1],
                 src.params()[g.param_offset + 2]);
    } else {
      dst.add_cnot(qubit_map[g.q0], qubit_map[g.q1]);
    }
  }
}

}  // namespace

PartitionedCircuit partition(const Circuit& c, std::size_t w) {
  if (w == 0) throw std::invalid_argument("partition width must be positive");
  if (c.n_qubits() < w) {
    throw std::invalid_argument("circuit narrower than partition width");
  }

  PartitionedCircuit out;
  out.source = c;
  out.w = w;

  std::set<std::size_t> active;
  std::size_t begin = 0;

  auto close_block = [&](std::size_t end) {
    if (end == begin) return;
    Block b;
    b.qubit_subset.assign(active.begin(), active.end());
    b.gate_begin = begin;
    b.gate_end = end;
    b.local = Circuit(b.qubit_subset.size());
    std::vector<std::size_t> map(c.n_qubits(), SIZE_MAX);
    for (std::size_t i = 0; i < b.qubit_subset.size(); ++i) {
      map[b.qubit_subset[i]] = i;
    }
    append_remapped(b.local, c, begin, end, map);
    out.blocks.push_back(std::move(b));
    active.clear();
    begin = end;
  };

  for (std::size_t gi = 0; gi < c.gates().size(); ++gi) {
    const auto qubits = gate_qubits(c.gates()[gi]);
    if (qubits.size() > w) {
      throw std::invalid_argument("gate acts on more qubits than the width");
    }
    std::set<std::size_t> merged = active;
    merged.insert(qubits.begin(), qubits.end());
    if (merged.size() > w) {
      close_block(gi);
      merged.clear();
      merged.insert(qubits.begin(), qubits.end());
    }
    active = std::move(merged);
  }
  close_block(c.gates().size());
  return out;
}

UnitaryMatrix block_unitary(const Block& b) { return evaluate(b.local); }

Circuit reassemble(const PartitionedCircuit& p,
                   const std::map<std::size_t, Circuit>& replacements) {
  Circuit out(p.source.n_qubits());
  for (std::size_t bi = 0; bi < p.blocks.size(); ++bi) {
    const Block& b = p.blocks[bi];
    const auto it = replacements.find(bi);
    if (it == replacements.end()) {
      std::vector<std::size_t> ident(p.source.n_qubits());
      for (std::size_t q = 0; q < ident.size(); ++q) ident[q] = q;
      append_remapped(out, p.source, b.gate_begin, b.gate_end, ident);
      continue;
    }
    const Circuit& repl = it->second;
    if (repl.n_qubits() != b.width()) {
      throw std::invalid_argument("replacement width does not match block " +
                                  std::to_string(bi));
    }
    append_remapped(out, repl, 0, repl.gates().size(), b.qubit_subset);
  }
  return out;
}

namespace {

VerificationReport finish_report(const PartitionedCircuit& original,
                                 const std::vector<Circuit>& locals,
                                 const Circuit& optimized) {
  VerificationReport report;
  for (std::size_t i = 0; i < original.blocks.size(); ++i) {
    const double d = phase_invariant_distance(
        block_unitary(original.blocks[i]), evaluate(locals[i]));
    report.per_block.push_back(d);
    report.total_bound += d;
  }
  if (original.source.n_qubits() <= 8) {
    report.has_exact = true;
    report.exact_distance =
        phase_invariant_distance(evaluate(original.source), evaluate(optimized));
    report.bound_ok = report.exact_distance <= report.total_bound + 1e-9;
  }
  return report;
}

}  // namespace

VerificationReport verify_bound(const PartitionedCircuit& original,
                                const Circuit& optimized) {
  if (optimized.n_qubits() != original.source.n_qubits()) {
    throw std::invalid_argument("optimized circuit width mismatch");
  }
  const std::size_t n_gates = optimized.gates().size();
  const std::size_t n_blocks = original.blocks.size();

  auto fits = [&](std::size_t gi, std::size_t bi) {
    const Block& b = original.blocks[bi];
    for (std::size_t q : gate_qubits(optimized.gates()[gi])) {
      if (!std::binary_search(b.qubit_subset.begin(), b.qubit_subset.end(), q)) {
        return false;
      }
    }
    return true;
  };

  // feasible[gi][bi]: gates gi.. can be assigned to blocks bi.. in order.
  std::vector<std::vector<char>> feasible(
      n_gates + 1, std::vector<char>(n_blocks + 1, 0));
  for (std::size_t bi = 0; bi <= n_blocks; ++bi) feasible[n_gates][bi] = 1;
  for (std::size_t gi = n_gates; gi-- > 0;) {
    for (std::size_t bi = n_blocks; bi-- > 0;) {
      feasible[gi][bi] = (fits(gi, bi) && feasible[gi + 1][bi]) ||
                         feasible[gi][bi + 1];
    }
  }
  if (n_gates > 0 && (n_blocks == 0 || !feasible[0][0])) {
    throw std::invalid_argument(
        "optimized circuit does not follow the original block structure");
  }

  std::vector<Circuit> locals;
  locals.reserve(n_blocks);
  for (const Block& b : original.blocks) locals.emplace_back(b.width());

  std::size_t bi = 0;
  for (std::size_t gi = 0; gi < n_gates; ++gi) {
    while (!(fits(gi, bi) && feasible[gi + 1][bi])) ++bi;
    const Block& b = original.blocks[bi];
    const GatePlacement& g = optimized.gates()[gi];
    if (g.kind == GateKind::u3) {
      locals[bi].add_u3(local_index(b.qubit_subset, g.q0),
                        optimized.params()[g.param_offset],
                        optimized.params()[g.param_offset + 1],
                        optimized.params()[g.param_offset + 2]);
    } else {
      locals[bi].add_cnot(local_index(b.qubit_subset, g.q0),
                          local_index(b.qubit_subset, g.q1));
    }
  }
  return finish_report(original, locals, optimized);
}

VerificationReport verify_bound(
    const PartitionedCircuit& original,
    const std::map<std::size_t, Circuit>& replacements) {
  std::vector<Circuit> locals;
  locals.reserve(original.blocks.size());
  for (std::size_t bi = 0; bi < original.blocks.size(); ++bi) {
    const auto it = replacements.find(bi);
    if (it == replacements.end()) {
      locals.push_back(original.blocks[bi].local);
    } else {
      if (it->second.n_qubits() != original.blocks[bi].width()) {
        throw std::invalid_argument("replacement width does not match block " +
                                    std::to_string(bi));
      }
      locals.push_back(it->second);
    }
  }
  return finish_report(original, locals, reassemble(original, replacements));
}

void write_partition_report(std::ostream& os, const PartitionedCircuit& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t bi = 0; bi < p.blocks.size(); ++bi) {
    const Block& b = p.blocks[bi];
    arr.push_back({{"block_index", bi},
                   {"qubits", b.qubit_subset},
                   {"gate_count", b.local.gates().size()},
                   {"cnot_count", b.local.cnot_count()}});
  }
  os << arr.dump(2) << '\n';
}

void write_verification_report(std::ostream& os, const std::string& name,
                               const VerificationReport& report) {
  nlohmann::json j{{"circuit", name},
                   {"total_bound", report.total_bound},
                   {"per_block", report.per_block}};
  if (report.has_exact) {
    j["exact_distance"] = report.exact_distance;
    j["bound_ok"] = report.bound_ok;
  }
  os << j.dump(2) << '\n';
}

}  // namespace seedsynth
