#include "seedsynth/instantiate.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "seedsynth/kernels.hpp"
#include "seedsynth/rng.hpp"

namespace seedsynth {

namespace {

double norm2(std::span<const double> v) {
  return std::sqrt(kernels::dot(v.data(), v.data(), v.size()));
}

struct LbfgsMemory {
  static constexpr std::size_t kPairs = 8;
  std::deque<std::vector<double>> s;
  std::deque<std::vector<double>> y;
  std::deque<double> rho;

  void clear() {
    s.clear();
    y.clear();
    rho.clear();
  }

  void push(std::vector<double> sk, std::vector<double> yk) {
    const double ys = kernels::dot(yk.data(), sk.data(), sk.size());
    const double yy = kernels::dot(yk.data(), yk.data(), yk.size());
    const double ss = kernels::dot(sk.data(), sk.data(), sk.size());
    if (!(ys > 1e-12 * std::sqrt(yy * ss))) return;  // curvature too weak
    s.push_back(std::move(sk));
    y.push_back(std::move(yk));
    rho.push_back(1.0 / ys);
    if (s.size() > kPairs) {
      s.pop_front();
      y.pop_front();
      rho.pop_front();
    }
  }

  // Two-loop recursion: d = -H * g.
  void direction(std::span<const double> grad, std::vector<double>& d) const {
    const std::size_t n = grad.size();
    d.assign(grad.begin(), grad.end());
    if (s.empty()) {
      for (double& v : d) v = -v;
      return;
    }
    std::vector<double> alpha(s.size());
    for (std::size_t i = s.size(); i-- > 0;) {
      alpha[i] = rho[i] * kernels::dot(s[i].data(), d.data(), n);
      kernels::axpy(-alpha[i], y[i].data(), d.data(), n);
    }
    const std::size_t last = s.size() - 1;
    const double gamma =
        kernels::dot(s[last].data(), y[last].data(), n) /
        kernels::dot(y[last].data(), y[last].data(), n);
    for (double& v : d) v *= gamma;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double beta = rho[i] * kernels::dot(y[i].data(), d.data(), n);
      kernels::axpy(alpha[i] - beta, s[i].data(), d.data(), n);
    }
    for (double& v : d) v = -v;
  }
};

}  // namespace

MinimizeResult minimize(const CostFn& cost_fn, const GradFn& grad_fn,
                        std::span<const double> x0,
                        const MinimizeOptions& options) {
  const std::size_t n = x0.size();
  MinimizeResult result;
  result.x.assign(x0.begin(), x0.end());
  if (n == 0) {
    result.cost = cost_fn(result.x);
    return result;
  }

  std::vector<double> grad(n), direction(n), x_new(n), grad_new(n);
  LbfgsMemory memory;

  double cost = grad_fn(result.x, grad);
  if (!std::isfinite(cost)) {
    throw std::runtime_error("non-finite cost at the initial point");
  }
  result.cost = cost;

  constexpr double kArmijo = 1e-4;

  while (result.iterations < options.max_iterations) {
    if (cost <= options.target_cost) break;
    const double grad_norm = norm2(grad);
    if (grad_norm <= options.grad_tolerance) break;

    memory.direction(grad, direction);
    double slope = kernels::dot(grad.data(), direction.data(), n);
    if (!(slope < 0.0)) {
      // Not a descent direction; restart from plain steepest descent.
      memory.clear();
      direction.assign(grad.begin(), grad.end());
      for (double& v : direction) v = -v;
      slope = -grad_norm * grad_norm;
    }

    double step = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      for (std::size_t i = 0; i < n; ++i) {
        x_new[i] = result.x[i] + step * direction[i];
      }
      const double cost_new = cost_fn(x_new);
      if (std::isfinite(cost_new) && cost_new <= cost + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Steepest descent stalled at machine precision: stop. Otherwise
      // drop the stale curvature pairs and retry.
      if (memory.s.empty()) break;
      memory.clear();
      continue;
    }

    const double cost_new = grad_fn(x_new, grad_new);
    ++result.iterations;

    std::vector<double> s_vec(n), y_vec(n);
    for (std::size_t i = 0; i < n; ++i) {
      s_vec[i] = x_new[i] - result.x[i];
      y_vec[i] = grad_new[i] - grad[i];
    }
    memory.push(std::move(s_vec), std::move(y_vec));

    result.x = x_new;
    grad = grad_new;
    cost = cost_new;
  }
  result.cost = cost;
  return result;
}

InstantiationResult instantiate_circuit(const UnitaryMatrix& target,
                                        const Circuit& skeleton,
                                        const InstantiationConfig& cfg,
                                        MetricsContext* metrics) {
  if (target.n_qubits() != skeleton.n_qubits()) {
    throw std::invalid_argument(
        "instantiation target width does not match skeleton");
  }
  if (metrics != nullptr) {
    metrics->instantiation_calls.fetch_add(1, std::memory_order_relaxed);
  }

  CostEvaluator evaluator(skeleton, target);
  const std::size_t m = evaluator.param_count();
  const CostFn cost_fn = [&](std::span<const double> x) {
    return evaluator.cost(x);
  };
  const GradFn grad_fn = [&](std::span<const double> x, std::span<double> g) {
    return evaluator.cost_and_grad(x, g);
  };

  MinimizeOptions mopts;
  mopts.max_iterations = cfg.max_iterations;
  mopts.target_cost = cfg.epsilon / 10.0;

  InstantiationResult best;
  best.cost = std::numeric_limits<double>::infinity();

  std::vector<double> x0(m, 0.0);
  for (std::size_t restart = 0; restart < cfg.max_restarts; ++restart) {
    if (restart > 0) {
      Rng rng(cfg.rng_seed, restart);
      for (double& v : x0) {
        v = rng.uniform(-std::numbers::pi, std::numbers::pi);
      }
    }
    const MinimizeResult r = minimize(cost_fn, grad_fn, x0, mopts);
    best.restarts_used = restart + 1;
    best.iterations += r.iterations;
    if (r.cost < best.cost) {
      best.cost = r.cost;
      best.params = r.x;
    }
    if (best.cost <= cfg.epsilon) break;
  }
  best.converged = best.cost <= cfg.epsilon;
  return best;
}

InstantiationResult instantiate(const UnitaryMatrix& target,
                                const Template& tmpl,
                                const InstantiationConfig& cfg,
                                MetricsContext* metrics) {
  return instantiate_circuit(target, tmpl.skeleton, cfg, metrics);
}

}  // namespace seedsynth
