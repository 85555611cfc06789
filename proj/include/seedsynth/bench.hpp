#pragma once

#include <cstdint>
#include <string>

#include "seedsynth/circuit.hpp"

namespace seedsynth {

// Desk-scale benchmark circuits, all in the CNOT+U3 gate set.

// Textbook QFT with controlled phases decomposed to CNOT+U3 and the final
// qubit-reversal swaps included; evaluates to the DFT matrix exactly.
Circuit bench_qft(std::size_t width);

// First-order Trotter layers of the transverse-field Ising chain; couplings
// drawn per instance from the seed.
Circuit bench_tfim(std::size_t width, std::size_t layers, std::uint64_t seed);

// Layers of per-qubit random U3 rotations plus one random neighbor CNOT.
Circuit bench_random_layers(std::size_t width, std::size_t layers,
                            std::uint64_t seed);

// family: qft | tfim | random_layers (depth ignored for qft).
Circuit generate_benchmark(const std::string& family, std::size_t width,
                           std::size_t depth, std::uint64_t seed);

}  // namespace seedsynth
