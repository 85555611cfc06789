#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "seedsynth/circuit.hpp"
#include "seedsynth/templates.hpp"

namespace seedsynth {

// Shared instrumentation owned by the caller; one increment per
// instantiate() invocation. This is the hardware-independent speed metric
// the evaluation harness compares strategies with.
struct MetricsContext {
  std::atomic<std::uint64_t> instantiation_calls{0};
};

struct InstantiationConfig {
  double epsilon = 1e-8;
  std::size_t max_restarts = 8;
  std::size_t max_iterations = 1000;
  std::uint64_t rng_seed = 0;
};

struct InstantiationResult {
  std::vector<double> params;
  double cost = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t restarts_used = 0;
};

struct MinimizeOptions {
  std::size_t max_iterations = 1000;
  double target_cost = 0.0;      // stop once cost <= target_cost
  double grad_tolerance = 1e-10;  // stop once ||grad||_2 <= this
};

struct MinimizeResult {
  std::vector<double> x;
  double cost = 0.0;
  std::size_t iterations = 0;
};

using CostFn = std::function<double(std::span<const double>)>;
using GradFn = std::function<double(std::span<const double>, std::span<double>)>;

// Quasi-Newton descent (L-BFGS directions, Armijo backtracking line search).
// The best cost seen is monotone non-increasing; stops on max_iterations,
// gradient norm, target cost, or a failed line search.
MinimizeResult minimize(const CostFn& cost_fn, const GradFn& grad_fn,
                        std::span<const double> x0,
                        const MinimizeOptions& options = {});

// Multi-start solve of min_theta 1 - |Tr(target' U(theta))|/N over the
// template skeleton. First start is all zeros, the rest uniform in
// [-pi, pi); restarts stop early once the cost reaches epsilon. Result is
// the best restart (ties to the lower restart index).
InstantiationResult instantiate(const UnitaryMatrix& target,
                                const Template& tmpl,
                                const InstantiationConfig& cfg,
                                MetricsContext* metrics = nullptr);

// Same solve against an explicit skeleton circuit (parameters ignored).
InstantiationResult instantiate_circuit(const UnitaryMatrix& target,
                                        const Circuit& skeleton,
                                        const InstantiationConfig& cfg,
                                        MetricsContext* metrics = nullptr);

}  // namespace seedsynth
