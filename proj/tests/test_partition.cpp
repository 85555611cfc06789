#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <sstream>

#include "seedsynth/bench.hpp"
#include "seedsynth/linalg.hpp"
#include "seedsynth/partition.hpp"
#include "seedsynth/rng.hpp"

using namespace seedsynth;

namespace {

constexpr double kPi = std::numbers::pi;

Circuit random_wide_circuit(std::size_t n_qubits, std::size_t layers,
                            Rng& rng) {
  return bench_random_layers(n_qubits, layers, rng.next_u64());
}

// Perturbs every U3 parameter of a block's local circuit by ~scale radians.
Circuit perturb(const Circuit& local, double scale, Rng& rng) {
  Circuit out = local;
  std::vector<double> params = local.params();
  for (double& p : params) p += scale * rng.normal();
  out.set_params(params);
  return out;
}

}  // namespace

TEST_CASE("single block when everything fits") {
  Rng rng(71);
  Circuit c(3);
  c.add_u3(0, 0.1, 0.2, 0.3);
  c.add_cnot(0, 1);
  c.add_cnot(1, 2);
  const PartitionedCircuit p = partition(c, 3);
  REQUIRE(p.blocks.size() == 1);
  CHECK(p.blocks[0].qubit_subset == std::vector<std::size_t>{0, 1, 2});
  CHECK(p.blocks[0].local.gates().size() == 3);
}

TEST_CASE("width-5 alternating layers split into blocks of at most 3") {
  Circuit c(5);
  for (int layer = 0; layer < 3; ++layer) {
    for (std::size_t q = 0; q + 1 < 5; ++q) c.add_cnot(q, q + 1);
  }
  const PartitionedCircuit p = partition(c, 3);
  CHECK(p.blocks.size() >= 2);
  std::size_t covered = 0;
  for (const Block& b : p.blocks) {
    CHECK(b.width() <= 3);
    CHECK(b.gate_end > b.gate_begin);
    CHECK(b.gate_begin == covered);
    covered = b.gate_end;
  }
  CHECK(covered == c.gates().size());
}

TEST_CASE("block count grows linearly with repeated layers") {
  Rng rng(72);
  std::vector<std::size_t> counts;
  for (std::size_t reps = 1; reps <= 4; ++reps) {
    Circuit c(5);
    for (std::size_t r = 0; r < reps; ++r) {
      for (std::size_t q = 0; q + 1 < 5; ++q) {
        c.add_cnot(q, q + 1);
        c.add_u3(q, 0.3, 0.1, 0.2);
      }
    }
    counts.push_back(partition(c, 3).blocks.size());
  }
  const std::size_t per_rep = counts[1] - counts[0];
  CHECK(per_rep >= 1);
  CHECK(counts[2] - counts[1] == per_rep);
  CHECK(counts[3] - counts[2] == per_rep);
}

TEST_CASE("cover property for random circuits") {
  Rng rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + trial % 3;
    const Circuit c = random_wide_circuit(n, 4 + trial % 5, rng);
    const PartitionedCircuit p = partition(c, 3);
    std::size_t covered = 0;
    for (const Block& b : p.blocks) {
      REQUIRE(b.gate_begin == covered);
      covered = b.gate_end;
      // Local slice reproduces the source gates, remapped.
      REQUIRE(b.local.gates().size() == b.gate_end - b.gate_begin);
      for (std::size_t gi = b.gate_begin; gi < b.gate_end; ++gi) {
        const GatePlacement& src = c.gates()[gi];
        const GatePlacement& loc = b.local.gates()[gi - b.gate_begin];
        CHECK(src.kind == loc.kind);
        CHECK(b.qubit_subset[loc.q0] == src.q0);
      }
    }
    CHECK(covered == c.gates().size());
  }
}

TEST_CASE("partition rejects bad widths") {
  Circuit c(2);
  c.add_cnot(0, 1);
  CHECK_THROWS_AS(partition(c, 0), std::invalid_argument);
  CHECK_THROWS_AS(partition(c, 3), std::invalid_argument);  // circuit narrower
  CHECK_THROWS_AS(partition(c, 1), std::invalid_argument);  // gate wider than w
}

TEST_CASE("reassemble with no replacements is the identity transform") {
  Rng rng(74);
  const Circuit c = random_wide_circuit(5, 6, rng);
  const PartitionedCircuit p = partition(c, 3);
  const Circuit back = reassemble(p, {});
  CHECK(back == c);
  CHECK(evaluate(back).matrix().max_abs_diff(evaluate(c).matrix()) == 0.0);
}

TEST_CASE("reassemble splices a block's own local circuit losslessly") {
  Rng rng(75);
  const Circuit c = random_wide_circuit(5, 6, rng);
  const PartitionedCircuit p = partition(c, 3);
  std::map<std::size_t, Circuit> replacements;
  replacements.emplace(0, p.blocks[0].local);
  const Circuit back = reassemble(p, replacements);
  CHECK(phase_invariant_distance(evaluate(back), evaluate(c)) <= 1e-12);
}

TEST_CASE("reassemble validates replacement width") {
  Rng rng(76);
  const Circuit c = random_wide_circuit(4, 4, rng);
  const PartitionedCircuit p = partition(c, 3);
  std::map<std::size_t, Circuit> replacements;
  replacements.emplace(0, Circuit(p.blocks[0].width() + 1));
  CHECK_THROWS_AS(reassemble(p, replacements), std::invalid_argument);
}

TEST_CASE("verify_bound on identical circuits is zero") {
  Rng rng(77);
  const Circuit c = random_wide_circuit(5, 5, rng);
  const PartitionedCircuit p = partition(c, 3);
  const VerificationReport r = verify_bound(p, c);
  CHECK(r.total_bound <= 1e-12);
  REQUIRE(r.has_exact);
  CHECK(r.exact_distance <= 1e-12);
  CHECK(r.bound_ok);
}

TEST_CASE("single perturbed block dominates the bound") {
  Rng rng(78);
  const Circuit c = random_wide_circuit(5, 5, rng);
  const PartitionedCircuit p = partition(c, 3);
  std::map<std::size_t, Circuit> replacements;
  replacements.emplace(0, perturb(p.blocks[0].local, 1e-4, rng));
  const VerificationReport r = verify_bound(p, replacements);
  CHECK(r.per_block[0] > 0.0);
  for (std::size_t b = 1; b < r.per_block.size(); ++b) {
    CHECK(r.per_block[b] <= 1e-12);
  }
  CHECK(r.total_bound == doctest::Approx(r.per_block[0]));
  CHECK(r.bound_ok);
}

TEST_CASE("summed bound holds for 100 random perturbed circuits") {
  // Perturbation scale matches what converged instantiations leave behind
  // (per-block distances around 1e-10); the summed phase-invariant bound is
  // only near-additive, so second-order cross terms between blocks must
  // stay inside the 1e-9 slack.
  Rng rng(79);
  double worst_excess = -1.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + trial % 3;
    const Circuit c = random_wide_circuit(n, 4 + trial % 4, rng);
    const PartitionedCircuit p = partition(c, 3);

    std::map<std::size_t, Circuit> replacements;
    for (std::size_t bi = 0; bi < p.blocks.size(); ++bi) {
      replacements.emplace(bi, perturb(p.blocks[bi].local, 3e-6, rng));
    }
    const VerificationReport r = verify_bound(p, replacements);
    REQUIRE(r.has_exact);
    worst_excess =
        std::max(worst_excess, r.exact_distance - r.total_bound);
    CHECK(r.exact_distance <= r.total_bound + 1e-9);
  }
  MESSAGE("worst exact-minus-bound excess: ", worst_excess);
}

TEST_CASE("both verify_bound overloads stay valid across shared qubits") {
  // Two overlapping blocks; the replacement for the second starts with a
  // gate on a shared qubit. The circuit overload may slice that gate into
  // the earlier block (any consistent split is a valid bound); the map
  // overload keeps the intended split.
  Circuit c(4);
  c.add_cnot(0, 1);
  c.add_cnot(1, 2);  // block 0 on {0,1,2}
  c.add_cnot(2, 3);  // opens block 1 on {2,3}
  const PartitionedCircuit p = partition(c, 3);
  REQUIRE(p.blocks.size() == 2);

  Circuit repl(2);  // width of block 1 ({2,3})
  repl.add_u3(0, 0.4, 0.1, -0.2);  // local qubit 0 is global 2, shared
  repl.add_cnot(0, 1);
  std::map<std::size_t, Circuit> replacements;
  replacements.emplace(1, repl);
  const Circuit optimized = reassemble(p, replacements);

  const VerificationReport from_map = verify_bound(p, replacements);
  CHECK(from_map.per_block[0] <= 1e-12);
  CHECK(from_map.per_block[1] > 1e-3);
  CHECK(from_map.bound_ok);

  const VerificationReport from_circuit = verify_bound(p, optimized);
  CHECK(from_circuit.bound_ok);
  CHECK(from_circuit.exact_distance ==
        doctest::Approx(from_map.exact_distance).epsilon(1e-12));
}

TEST_CASE("verify_bound rejects foreign circuits") {
  Circuit c(4);
  c.add_cnot(0, 1);
  c.add_cnot(1, 2);
  c.add_cnot(2, 3);
  const PartitionedCircuit p = partition(c, 3);  // blocks {0,1,2}, {2,3}
  CHECK_THROWS_AS(verify_bound(p, Circuit(5)), std::invalid_argument);

  // No block contains {0,3}.
  Circuit foreign(4);
  foreign.add_cnot(0, 3);
  CHECK_THROWS_AS(verify_bound(p, foreign), std::invalid_argument);

  // Block order matters: a block-1 gate before a block-0 gate cannot split.
  Circuit reordered(4);
  reordered.add_cnot(2, 3);
  reordered.add_cnot(0, 1);
  reordered.add_cnot(1, 2);
  CHECK_THROWS_AS(verify_bound(p, reordered), std::invalid_argument);
}

TEST_CASE("exact verification works at the 8-qubit boundary") {
  const Circuit c = bench_tfim(8, 1, 42);
  const PartitionedCircuit p = partition(c, 3);
  CHECK(p.blocks.size() >= 3);
  const VerificationReport r = verify_bound(p, c);
  REQUIRE(r.has_exact);
  CHECK(r.exact_distance <= 1e-12);
  CHECK(r.bound_ok);
}

TEST_CASE("report writers emit the pinned schemas") {
  Rng rng(81);
  const Circuit c = random_wide_circuit(4, 3, rng);
  const PartitionedCircuit p = partition(c, 3);
  std::ostringstream os;
  write_partition_report(os, p);
  CHECK(os.str().find("\"block_index\"") != std::string::npos);
  CHECK(os.str().find("\"cnot_count\"") != std::string::npos);

  std::ostringstream vs;
  write_verification_report(vs, "example", verify_bound(p, c));
  CHECK(vs.str().find("\"circuit\"") != std::string::npos);
  CHECK(vs.str().find("\"total_bound\"") != std::string::npos);
  CHECK(vs.str().find("\"exact_distance\"") != std::string::npos);
}
