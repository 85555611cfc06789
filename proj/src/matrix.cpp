#include "seedsynth/matrix.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "seedsynth/kernels.hpp"

namespace seedsynth {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, cplx(0.0, 0.0)) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("matrix dimensions must be positive");
  }
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<cplx> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("matrix dimensions must be positive");
  }
  if (entries_.size() != rows * cols) {
    throw std::invalid_argument("entry count does not match rows*cols");
  }
  check_finite();
}

void ComplexMatrix::check_finite() const {
  for (const cplx& z : entries_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument("matrix entries must be finite");
    }
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      out.at(c, r) = std::conj(at(r, c));
    }
  }
  return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
  if (cols_ != rhs.rows_) {
    throw std::invalid_argument("matrix product dimension mismatch: " +
                                std::to_string(cols_) + " vs " +
                                std::to_string(rhs.rows_));
  }
  ComplexMatrix out(rows_, rhs.cols_);
  kernels::matmul(data(), rhs.data(), out.data(), rows_, cols_, rhs.cols_);
  return out;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scale) {
  for (cplx& z : entries_) z *= scale;
  return *this;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    return std::numeric_limits<double>::infinity();
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    worst = std::max(worst, std::abs(entries_[i] - other.entries_[i]));
  }
  return worst;
}

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t log2_exact(std::size_t n) {
  std::size_t bits = 0;
  while ((std::size_t(1) << bits) < n) ++bits;
  return bits;
}

}  // namespace

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m) : matrix_(std::move(m)) {
  if (!matrix_.is_square() || !is_power_of_two(matrix_.rows())) {
    throw std::invalid_argument("unitary dimension must be a power of two");
  }
  n_qubits_ = log2_exact(matrix_.rows());
  const std::size_t n = matrix_.rows();
  // Max-entry check of U'U - I. Rows of the adjoint are conjugated columns
  // of U, so |(U'U)_{ij}| == |cdotc(adj_row_j, adj_row_i)|.
  const ComplexMatrix adj = matrix_.adjoint();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cplx v = kernels::cdotc(adj.data() + j * n, adj.data() + i * n, n);
      if (i == j) v -= 1.0;
      worst = std::max(worst, std::abs(v));
    }
  }
  if (worst > kUnitarityTolerance) {
    throw std::invalid_argument("matrix is not unitary (max deviation " +
                                std::to_string(worst) + ")");
  }
}

UnitaryMatrix UnitaryMatrix::identity(std::size_t n_qubits) {
  return UnitaryMatrix(ComplexMatrix::identity(std::size_t(1) << n_qubits));
}

}  // namespace seedsynth
