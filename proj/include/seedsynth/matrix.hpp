#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace seedsynth {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Entries are validated to be finite on
// construction; all arithmetic routes through the dispatched kernels.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return entries_.size(); }

  cplx& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const cplx& at(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }
  cplx& operator()(std::size_t r, std::size_t c) { return at(r, c); }
  const cplx& operator()(std::size_t r, std::size_t c) const { return at(r, c); }

  cplx* data() { return entries_.data(); }
  const cplx* data() const { return entries_.data(); }

  ComplexMatrix adjoint() const;
  ComplexMatrix operator*(const ComplexMatrix& rhs) const;
  ComplexMatrix& operator*=(cplx scale);

  // Largest entry-wise |a_ij - b_ij|; dimension mismatch counts as infinite.
  double max_abs_diff(const ComplexMatrix& other) const;

  bool is_square() const { return rows_ == cols_; }

 private:
  void check_finite() const;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> entries_;
};

// A ComplexMatrix constrained to be unitary with power-of-two dimension.
// Construction enforces max-entry |U'U - I| <= 1e-10.
class UnitaryMatrix {
 public:
  static constexpr double kUnitarityTolerance = 1e-10;

  explicit UnitaryMatrix(ComplexMatrix m);

  std::size_t dim() const { return matrix_.rows(); }
  std::size_t n_qubits() const { return n_qubits_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  const cplx* data() const { return matrix_.data(); }
  const cplx& at(std::size_t r, std::size_t c) const { return matrix_.at(r, c); }

  static UnitaryMatrix identity(std::size_t n_qubits);

 private:
  ComplexMatrix matrix_;
  std::size_t n_qubits_ = 0;
};

}  // namespace seedsynth
