#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <vector>

#include "seedsynth/matrix.hpp"

namespace seedsynth {

enum class GateKind { u3, cnot };

// One gate in a circuit. U3 gates consume three parameters starting at
// param_offset; CNOT consumes none.
struct GatePlacement {
  GateKind kind;
  std::size_t q0;  // U3 target, or CNOT control
  std::size_t q1;  // CNOT target (unused for U3)
  std::size_t param_offset;

  bool operator==(const GatePlacement&) const = default;
};

// Allowed two-qubit interactions (Def. of a coupling graph): undirected
// edges between qubit indices, no self loops.
class QubitTopology {
 public:
  QubitTopology(std::size_t n_qubits,
                std::vector<std::pair<std::size_t, std::size_t>> edges);

  // Path topology visiting `order` front to back, e.g. {0,2,1} for 0-2-1.
  static QubitTopology line(const std::vector<std::size_t>& order);

  std::size_t n_qubits() const { return n_qubits_; }
  const std::set<std::pair<std::size_t, std::size_t>>& edges() const {
    return edges_;
  }
  bool has_edge(std::size_t a, std::size_t b) const;

  bool operator==(const QubitTopology&) const = default;

 private:
  std::size_t n_qubits_;
  std::set<std::pair<std::size_t, std::size_t>> edges_;  // normalized (lo, hi)
};

// Ordered gate list plus the parameter vector feeding its U3 gates. Gates
// apply in list order; as matrices that is a right-to-left product, so
// appending a gate multiplies on the left. Qubit 0 is the most significant
// index bit everywhere.
class Circuit {
 public:
  explicit Circuit(std::size_t n_qubits);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return std::size_t(1) << n_qubits_; }
  const std::vector<GatePlacement>& gates() const { return gates_; }
  const std::vector<double>& params() const { return params_; }
  std::size_t param_count() const { return params_.size(); }

  void add_u3(std::size_t qubit, double theta = 0.0, double phi = 0.0,
              double lambda = 0.0);
  void add_cnot(std::size_t control, std::size_t target);

  void set_params(std::span<const double> params);

  std::size_t cnot_count() const;
  std::size_t u3_count() const;

  bool operator==(const Circuit&) const = default;

 private:
  std::size_t n_qubits_;
  std::vector<GatePlacement> gates_;
  std::vector<double> params_;
};

// The general single-qubit rotation
//   [[cos(t/2),            -e^{i*l} sin(t/2)],
//    [e^{i*p} sin(t/2),     e^{i(p+l)} cos(t/2)]]
UnitaryMatrix u3_matrix(double theta, double phi, double lambda);

UnitaryMatrix evaluate(const Circuit& c);

double circuit_cost(const Circuit& c, const UnitaryMatrix& target);

// d cost / d theta_i of cost = 1 - |Tr(target' U(theta))|/N at the circuit's
// current parameters.
std::vector<double> gradient(const Circuit& c, const UnitaryMatrix& target);

// Reusable cost/gradient evaluator for a fixed skeleton and target; holds
// all workspaces so optimizer loops stay allocation free.
class CostEvaluator {
 public:
  CostEvaluator(const Circuit& skeleton, const UnitaryMatrix& target);

  std::size_t param_count() const { return param_count_; }
  double cost(std::span<const double> params);
  double cost_and_grad(std::span<const double> params, std::span<double> grad);

  // U(theta) as a raw buffer (dim x dim row-major), no unitarity check.
  void evaluate_raw(std::span<const double> params, cplx* out);

 private:
  struct GateInfo {
    GateKind kind;
    std::size_t param_offset;
    std::size_t mask0;       // U3 target bit, or CNOT control bit
    std::size_t mask1;       // CNOT target bit
    std::size_t prefix_slot;  // snapshot index for U3 gates
  };

  void apply_gate(const GateInfo& g, std::span<const double> params, cplx* m,
                  bool transpose) const;
  void forward(std::span<const double> params, bool snapshot);

  std::size_t n_;
  std::size_t dim_;
  std::size_t param_count_;
  std::vector<GateInfo> gates_;
  std::vector<cplx> target_;      // conj-free copy of the target
  std::vector<cplx> unitary_;     // forward product
  std::vector<cplx> suffix_t_;    // (target' * suffix)^T during backward sweep
  std::vector<std::vector<cplx>> prefixes_;
};

}  // namespace seedsynth
