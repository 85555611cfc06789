#include "seedsynth/bench.hpp"

#include <numbers>
#include <stdexcept>

#include "seedsynth/rng.hpp"

namespace seedsynth {

namespace {

constexpr double kPi = std::numbers::pi;

void add_hadamard(Circuit& c, std::size_t q) { c.add_u3(q, kPi / 2.0, 0.0, kPi); }

void add_phase(Circuit& c, std::size_t q, double lambda) {
  c.add_u3(q, 0.0, 0.0, lambda);
}

// cp(lambda) = p(l/2) c; cx; p(-l/2) t; cx; p(l/2) t
void add_controlled_phase(Circuit& c, std::size_t control, std::size_t target,
                          double lambda) {
  add_phase(c, control, lambda / 2.0);
  c.add_cnot(control, target);
  add_phase(c, target, -lambda / 2.0);
  c.add_cnot(control, target);
  add_phase(c, target, lambda / 2.0);
}

void add_swap(Circuit& c, std::size_t a, std::size_t b) {
  c.add_cnot(a, b);
  c.add_cnot(b, a);
  c.add_cnot(a, b);
}

void check_width(std::size_t width) {
  if (width < 1 || width > 16) {
    throw std::invalid_argument("benchmark width must be in 1..16");
  }
}

}  // namespace

Circuit bench_qft(std::size_t width) {
  check_width(width);
  Circuit c(width);
  for (std::size_t i = 0; i < width; ++i) {
    add_hadamard(c, i);
    for (std::size_t j = i + 1; j < width; ++j) {
      add_controlled_phase(c, j, i, kPi / static_cast<double>(1ull << (j - i)));
    }
  }
  for (std::size_t i = 0; i < width / 2; ++i) {
    add_swap(c, i, width - 1 - i);
  }
  return c;
}

Circuit bench_tfim(std::size_t width, std::size_t layers, std::uint64_t seed) {
  check_width(width);
  if (layers < 1) throw std::invalid_argument("tfim needs at least one layer");
  Rng rng(seed, 0x7466696d);
  const double coupling = rng.uniform(0.5, 1.5);
  const double field = rng.uniform(0.5, 1.5);
  const double dt = 0.2;

  Circuit c(width);
  for (std::size_t layer = 0; layer < layers; ++layer) {
    // exp(-i J dt Z_i Z_{i+1}) up to phase: cx; rz(2 J dt); cx
    for (std::size_t q = 0; q + 1 < width; ++q) {
      c.add_cnot(q, q + 1);
      add_phase(c, q + 1, 2.0 * coupling * dt);
      c.add_cnot(q, q + 1);
    }
    // exp(-i h dt X) up to phase: rx(2 h dt) = u3(theta, -pi/2, pi/2)
    for (std::size_t q = 0; q < width; ++q) {
      c.add_u3(q, 2.0 * field * dt, -kPi / 2.0, kPi / 2.0);
    }
  }
  return c;
}

Circuit bench_random_layers(std::size_t width, std::size_t layers,
                            std::uint64_t seed) {
  check_width(width);
  if (layers < 1) {
    throw std::invalid_argument("random_layers needs at least one layer");
  }
  Rng rng(seed, 0x726e64);
  Circuit c(width);
  for (std::size_t layer = 0; layer < layers; ++layer) {
    for (std::size_t q = 0; q < width; ++q) {
      const double theta = rng.uniform(-kPi, kPi);
      const double phi = rng.uniform(-kPi, kPi);
      const double lambda = rng.uniform(-kPi, kPi);
      c.add_u3(q, theta, phi, lambda);
    }
    if (width >= 2) {
      const std::size_t a = rng.uniform_int(width - 1);
      c.add_cnot(a, a + 1);
    }
  }
  return c;
}

Circuit generate_benchmark(const std::string& family, std::size_t width,
                           std::size_t depth, std::uint64_t seed) {
  if (family == "qft") return bench_qft(width);
  if (family == "tfim") return bench_tfim(width, depth, seed);
  if (family == "random_layers" || family == "random") {
    return bench_random_layers(width, depth, seed);
  }
  throw std::invalid_argument("unknown benchmark family '" + family + "'");
}

}  // namespace seedsynth
