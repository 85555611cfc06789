#include "seedsynth/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "seedsynth/kernels.hpp"

namespace seedsynth {

QubitTopology::QubitTopology(
    std::size_t n_qubits,
    std::vector<std::pair<std::size_t, std::size_t>> edges)
    : n_qubits_(n_qubits) {
  if (n_qubits == 0) throw std::invalid_argument("topology needs qubits");
  for (auto [a, b] : edges) {
    if (a == b) throw std::invalid_argument("topology edge is a self-loop");
    if (a >= n_qubits || b >= n_qubits) {
      throw std::invalid_argument("topology edge references unknown qubit");
    }
    edges_.insert({std::min(a, b), std::max(a, b)});
  }
}

QubitTopology QubitTopology::line(const std::vector<std::size_t>& order) {
  if (order.empty()) throw std::invalid_argument("empty line order");
  std::size_t n = *std::max_element(order.begin(), order.end()) + 1;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    edges.emplace_back(order[i], order[i + 1]);
  }
  return QubitTopology(n, std::move(edges));
}

bool QubitTopology::has_edge(std::size_t a, std::size_t b) const {
  return edges_.count({std::min(a, b), std::max(a, b)}) > 0;
}

Circuit::Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits == 0) throw std::invalid_argument("circuit needs qubits");
}

void Circuit::add_u3(std::size_t qubit, double theta, double phi,
                     double lambda) {
  if (qubit >= n_qubits_) throw std::invalid_argument("u3 qubit out of range");
  gates_.push_back({GateKind::u3, qubit, 0, params_.size()});
  params_.push_back(theta);
  params_.push_back(phi);
  params_.push_back(lambda);
}

void Circuit::add_cnot(std::size_t control, std::size_t target) {
  if (control >= n_qubits_ || target >= n_qubits_) {
    throw std::invalid_argument("cnot qubit out of range");
  }
  if (control == target) {
    throw std::invalid_argument("cnot control equals target");
  }
  gates_.push_back({GateKind::cnot, control, target, params_.size()});
}

void Circuit::set_params(std::span<const double> params) {
  if (params.size() != params_.size()) {
    throw std::invalid_argument("parameter count mismatch: expected " +
                                std::to_string(params_.size()) + ", got " +
                                std::to_string(params.size()));
  }
  params_.assign(params.begin(), params.end());
}

std::size_t Circuit::cnot_count() const {
  std::size_t n = 0;
  for (const auto& g : gates_) n += g.kind == GateKind::cnot ? 1 : 0;
  return n;
}

std::size_t Circuit::u3_count() const { return params_.size() / 3; }

UnitaryMatrix u3_matrix(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const cplx el = std::polar(1.0, lambda);
  const cplx ep = std::polar(1.0, phi);
  const cplx epl = std::polar(1.0, phi + lambda);
  return UnitaryMatrix(
      ComplexMatrix(2, 2, {cplx(c, 0.0), -el * s, ep * s, epl * c}));
}

namespace {

struct U3Coeffs {
  cplx g00, g01, g10, g11;
};

U3Coeffs u3_coeffs(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const cplx el = std::polar(1.0, lambda);
  const cplx ep = std::polar(1.0, phi);
  const cplx epl = std::polar(1.0, phi + lambda);
  return {cplx(c, 0.0), -el * s, ep * s, epl * c};
}

// Derivatives of the U3 entries with respect to (theta, phi, lambda).
void u3_derivatives(double theta, double phi, double lambda, U3Coeffs d[3]) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const cplx el = std::polar(1.0, lambda);
  const cplx ep = std::polar(1.0, phi);
  const cplx epl = std::polar(1.0, phi + lambda);
  const cplx i_unit(0.0, 1.0);
  d[0] = {cplx(-s / 2.0, 0.0), -el * (c / 2.0), ep * (c / 2.0),
          epl * (-s / 2.0)};
  d[1] = {cplx(0.0, 0.0), cplx(0.0, 0.0), i_unit * ep * s, i_unit * epl * c};
  d[2] = {cplx(0.0, 0.0), -i_unit * el * s, cplx(0.0, 0.0), i_unit * epl * c};
}

inline std::size_t qubit_mask(std::size_t n_qubits, std::size_t qubit) {
  return std::size_t(1) << (n_qubits - 1 - qubit);
}

void apply_u3_rows(cplx* m, std::size_t dim, std::size_t mask,
                   const U3Coeffs& g) {
  for (std::size_t i0 = 0; i0 < dim; ++i0) {
    if (i0 & mask) continue;
    kernels::rotate_pair(m + i0 * dim, m + (i0 | mask) * dim, dim, g.g00,
                         g.g01, g.g10, g.g11);
  }
}

void apply_cnot_rows(cplx* m, std::size_t dim, std::size_t control_mask,
                     std::size_t target_mask) {
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & control_mask) && !(i & target_mask)) {
      std::swap_ranges(m + i * dim, m + i * dim + dim,
                       m + (i | target_mask) * dim);
    }
  }
}

}  // namespace

CostEvaluator::CostEvaluator(const Circuit& skeleton,
                             const UnitaryMatrix& target)
    : n_(skeleton.n_qubits()),
      dim_(skeleton.dim()),
      param_count_(skeleton.param_count()) {
  if (target.dim() != dim_) {
    throw std::invalid_argument("target dimension does not match circuit");
  }
  std::size_t slot = 0;
  for (const GatePlacement& g : skeleton.gates()) {
    GateInfo info{};
    info.kind = g.kind;
    info.param_offset = g.param_offset;
    if (g.kind == GateKind::u3) {
      info.mask0 = qubit_mask(n_, g.q0);
      info.prefix_slot = slot++;
    } else {
      info.mask0 = qubit_mask(n_, g.q0);
      info.mask1 = qubit_mask(n_, g.q1);
      info.prefix_slot = std::size_t(-1);
    }
    gates_.push_back(info);
  }
  target_.assign(target.data(), target.data() + dim_ * dim_);
  unitary_.resize(dim_ * dim_);
  suffix_t_.resize(dim_ * dim_);
  prefixes_.assign(slot, std::vector<cplx>(dim_ * dim_));
}

void CostEvaluator::apply_gate(const GateInfo& g, std::span<const double> p,
                               cplx* m, bool transpose) const {
  if (g.kind == GateKind::u3) {
    U3Coeffs c = u3_coeffs(p[g.param_offset], p[g.param_offset + 1],
                           p[g.param_offset + 2]);
    if (transpose) std::swap(c.g01, c.g10);
    apply_u3_rows(m, dim_, g.mask0, c);
  } else {
    apply_cnot_rows(m, dim_, g.mask0, g.mask1);
  }
}

void CostEvaluator::forward(std::span<const double> params, bool snapshot) {
  std::fill(unitary_.begin(), unitary_.end(), cplx(0.0, 0.0));
  for (std::size_t i = 0; i < dim_; ++i) unitary_[i * dim_ + i] = 1.0;
  for (const GateInfo& g : gates_) {
    if (snapshot && g.kind == GateKind::u3) {
      prefixes_[g.prefix_slot] = unitary_;
    }
    apply_gate(g, params, unitary_.data(), false);
  }
}

double CostEvaluator::cost(std::span<const double> params) {
  if (params.size() != param_count_) {
    throw std::invalid_argument("parameter count mismatch");
  }
  forward(params, false);
  const cplx overlap =
      kernels::cdotc(target_.data(), unitary_.data(), dim_ * dim_);
  return std::clamp(1.0 - std::abs(overlap) / static_cast<double>(dim_), 0.0,
                    1.0);
}

double CostEvaluator::cost_and_grad(std::span<const double> params,
                                    std::span<double> grad) {
  if (params.size() != param_count_ || grad.size() != param_count_) {
    throw std::invalid_argument("parameter count mismatch");
  }
  forward(params, true);
  const cplx overlap =
      kernels::cdotc(target_.data(), unitary_.data(), dim_ * dim_);
  const double overlap_abs = std::abs(overlap);
  const double cost =
      std::clamp(1.0 - overlap_abs / static_cast<double>(dim_), 0.0, 1.0);

  // d cost/d p = -Re(conj(T) * dT/dp) / (|T| * N); at |T| == 0 the cost is
  // not differentiable, use subgradient zero.
  if (overlap_abs < 1e-14) {
    std::fill(grad.begin(), grad.end(), 0.0);
    return cost;
  }
  const cplx trace_factor =
      std::conj(overlap) / (overlap_abs * static_cast<double>(dim_));

  // Backward sweep. suffix_t_ holds (target' * S_k)^T where S_k is the
  // product of gates after k; rows of both it and the stored prefixes are
  // contiguous, so every (P*A) entry is a single cdotu.
  for (std::size_t i = 0; i < dim_ * dim_; ++i) {
    suffix_t_[i] = std::conj(target_[i]);
  }
  for (std::size_t gi = gates_.size(); gi-- > 0;) {
    const GateInfo& g = gates_[gi];
    if (g.kind == GateKind::u3) {
      const cplx* prefix = prefixes_[g.prefix_slot].data();
      const cplx* at = suffix_t_.data();
      cplx qsum[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
      for (std::size_t i0 = 0; i0 < dim_; ++i0) {
        if (i0 & g.mask0) continue;
        const std::size_t i1 = i0 | g.mask0;
        const cplx* p_row0 = prefix + i0 * dim_;
        const cplx* p_row1 = prefix + i1 * dim_;
        const cplx* a_row0 = at + i0 * dim_;
        const cplx* a_row1 = at + i1 * dim_;
        qsum[0][0] += kernels::cdotu(p_row0, a_row0, dim_);
        qsum[0][1] += kernels::cdotu(p_row1, a_row0, dim_);
        qsum[1][0] += kernels::cdotu(p_row0, a_row1, dim_);
        qsum[1][1] += kernels::cdotu(p_row1, a_row1, dim_);
      }
      U3Coeffs d[3];
      u3_derivatives(params[g.param_offset], params[g.param_offset + 1],
                     params[g.param_offset + 2], d);
      for (int p = 0; p < 3; ++p) {
        const cplx d_trace = d[p].g00 * qsum[0][0] + d[p].g01 * qsum[0][1] +
                             d[p].g10 * qsum[1][0] + d[p].g11 * qsum[1][1];
        grad[g.param_offset + p] = -(trace_factor * d_trace).real();
      }
    }
    apply_gate(g, params, suffix_t_.data(), true);
  }
  return cost;
}

void CostEvaluator::evaluate_raw(std::span<const double> params, cplx* out) {
  if (params.size() != param_count_) {
    throw std::invalid_argument("parameter count mismatch");
  }
  forward(params, false);
  std::copy(unitary_.begin(), unitary_.end(), out);
}

UnitaryMatrix evaluate(const Circuit& c) {
  const std::size_t dim = c.dim();
  ComplexMatrix m = ComplexMatrix::identity(dim);
  for (const GatePlacement& g : c.gates()) {
    if (g.kind == GateKind::u3) {
      const U3Coeffs coeffs =
          u3_coeffs(c.params()[g.param_offset], c.params()[g.param_offset + 1],
                    c.params()[g.param_offset + 2]);
      apply_u3_rows(m.data(), dim, qubit_mask(c.n_qubits(), g.q0), coeffs);
    } else {
      apply_cnot_rows(m.data(), dim, qubit_mask(c.n_qubits(), g.q0),
                      qubit_mask(c.n_qubits(), g.q1));
    }
  }
  return UnitaryMatrix(std::move(m));
}

double circuit_cost(const Circuit& c, const UnitaryMatrix& target) {
  CostEvaluator eval(c, target);
  return eval.cost(c.params());
}

std::vector<double> gradient(const Circuit& c, const UnitaryMatrix& target) {
  CostEvaluator eval(c, target);
  std::vector<double> grad(c.param_count());
  eval.cost_and_grad(c.params(), grad);
  return grad;
}

}  // namespace seedsynth
