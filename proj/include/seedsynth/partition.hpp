#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <vector>

#include "seedsynth/circuit.hpp"

namespace seedsynth {

// Contiguous slice of a wide circuit acting on at most w qubits. The local
// circuit is the slice remapped onto qubit_subset (ascending global order).
struct Block {
  std::vector<std::size_t> qubit_subset;
  std::size_t gate_begin = 0;  // slice [gate_begin, gate_end) of the source
  std::size_t gate_end = 0;
  Circuit local{1};

  std::size_t width() const { return qubit_subset.size(); }
};

struct PartitionedCircuit {
  Circuit source{1};
  std::size_t w = 3;
  std::vector<Block> blocks;
};

// Greedy left-to-right scan: a gate joins the open block while the union of
// active qubits stays within w, otherwise the block closes and a new one
// opens on that gate's qubits. Every gate lands in exactly one block.
PartitionedCircuit partition(const Circuit& c, std::size_t w);

// Local unitary of one block (width <= 8 expected).
UnitaryMatrix block_unitary(const Block& b);

// Splices per-block replacement circuits (local qubit indexing) back into
// the source gate order; blocks without a replacement keep their gates.
Circuit reassemble(const PartitionedCircuit& p,
                   const std::map<std::size_t, Circuit>& replacements);

struct VerificationReport {
  std::vector<double> per_block;  // phase-invariant distance per block
  double total_bound = 0.0;       // sum of the above
  bool has_exact = false;         // full-unitary check ran (n <= 8)
  double exact_distance = 0.0;
  bool bound_ok = true;           // exact <= total_bound + 1e-9 when checked
};

// Splits `optimized` along the original block boundaries (gates assigned to
// the earliest block that keeps the remaining gates assignable) and sums the
// per-block distances. Any consistent split yields a valid bound; when
// adjacent blocks share qubits the recovered split may differ from the one
// reassemble produced, so the pipeline uses the overload below. For n <= 8
// qubits the exact full-unitary distance is also computed and checked
// against the summed bound.
VerificationReport verify_bound(const PartitionedCircuit& original,
                                const Circuit& optimized);

// Same report with the per-block replacements known exactly; blocks absent
// from the map count as unchanged.
VerificationReport verify_bound(const PartitionedCircuit& original,
                                const std::map<std::size_t, Circuit>& replacements);

void write_partition_report(std::ostream& os, const PartitionedCircuit& p);
void write_verification_report(std::ostream& os, const std::string& name,
                               const VerificationReport& report);

}  // namespace seedsynth
