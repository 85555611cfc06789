#include "seedsynth/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "seedsynth/kernels.hpp"
#include "seedsynth/rng.hpp"

namespace seedsynth {

double hs_norm_sq(const ComplexMatrix& a) {
  if (!a.is_square()) {
    throw std::invalid_argument("hs_norm requires a square matrix");
  }
  const double* flat = reinterpret_cast<const double*>(a.data());
  return kernels::dot(flat, flat, 2 * a.size());
}

double hs_norm(const ComplexMatrix& a) { return std::sqrt(hs_norm_sq(a)); }

double phase_invariant_distance(const UnitaryMatrix& u,
                                const UnitaryMatrix& v) {
  if (u.dim() != v.dim()) {
    throw std::invalid_argument("phase_invariant_distance dimension mismatch");
  }
  const std::size_t n = u.dim();
  const cplx overlap = kernels::cdotc(u.data(), v.data(), n * n);
  const double d = 1.0 - std::abs(overlap) / static_cast<double>(n);
  return std::clamp(d, 0.0, 1.0);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx scale = a.at(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) {
          out.at(i * b.rows() + k, j * b.cols() + l) = scale * b.at(k, l);
        }
      }
    }
  }
  return out;
}

UnitaryMatrix random_unitary(std::size_t n_qubits, std::uint64_t rng_seed) {
  if (n_qubits < 1 || n_qubits > 8) {
    throw std::invalid_argument("random_unitary supports 1..8 qubits");
  }
  const std::size_t n = std::size_t(1) << n_qubits;
  Rng rng(rng_seed);

  std::vector<cplx> a(n * n);
  for (cplx& z : a) z = cplx(rng.normal(), rng.normal()) * std::sqrt(0.5);

  // Householder QR; reflectors are replayed onto the identity to build Q,
  // then the R diagonal phases are folded into Q's columns (Mezzadri's
  // recipe for a Haar sample).
  std::vector<std::vector<cplx>> reflectors;
  std::vector<cplx> r_diag(n);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    double norm_sq = 0.0;
    for (std::size_t i = j; i < n; ++i) norm_sq += std::norm(a[i * n + j]);
    const double norm = std::sqrt(norm_sq);
    const cplx x0 = a[j * n + j];
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0, 0.0);
    const cplx alpha = -phase * norm;

    std::vector<cplx> v(n - j);
    for (std::size_t i = j; i < n; ++i) v[i - j] = a[i * n + j];
    v[0] -= alpha;
    double v_norm_sq = 0.0;
    for (const cplx& z : v) v_norm_sq += std::norm(z);
    if (v_norm_sq > 1e-300) {
      const double inv = 1.0 / std::sqrt(v_norm_sq);
      for (cplx& z : v) z *= inv;
      // A[j:, j:] -= 2 v (v' A[j:, j:])
      for (std::size_t c = j; c < n; ++c) {
        cplx w(0.0, 0.0);
        for (std::size_t i = j; i < n; ++i) w += std::conj(v[i - j]) * a[i * n + c];
        w *= 2.0;
        for (std::size_t i = j; i < n; ++i) a[i * n + c] -= v[i - j] * w;
      }
    } else {
      v.assign(n - j, cplx(0.0, 0.0));
    }
    reflectors.push_back(std::move(v));
    r_diag[j] = a[j * n + j];
  }
  r_diag[n - 1] = a[(n - 1) * n + (n - 1)];

  ComplexMatrix q = ComplexMatrix::identity(n);
  for (std::size_t jj = reflectors.size(); jj-- > 0;) {
    const std::vector<cplx>& v = reflectors[jj];
    const std::size_t j = jj;
    for (std::size_t c = 0; c < n; ++c) {
      cplx w(0.0, 0.0);
      for (std::size_t i = j; i < n; ++i) {
        w += std::conj(v[i - j]) * q.at(i, c);
      }
      w *= 2.0;
      for (std::size_t i = j; i < n; ++i) q.at(i, c) -= v[i - j] * w;
    }
  }

  for (std::size_t j = 0; j < n; ++j) {
    const double mag = std::abs(r_diag[j]);
    const cplx d = mag > 0.0 ? r_diag[j] / mag : cplx(1.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) q.at(i, j) *= d;
  }
  return UnitaryMatrix(std::move(q));
}

std::uint64_t max_cnots(std::size_t n_qubits) {
  if (n_qubits < 1 || n_qubits > 30) {
    throw std::invalid_argument("max_cnots expects 1 <= n <= 30");
  }
  const std::uint64_t numerator =
      (std::uint64_t(1) << (2 * n_qubits)) - 3 * n_qubits - 1;
  return (numerator + 3) / 4;
}

cplx determinant(const ComplexMatrix& m) {
  if (!m.is_square()) {
    throw std::invalid_argument("determinant requires a square matrix");
  }
  const std::size_t n = m.rows();
  std::vector<cplx> a(m.data(), m.data() + n * n);
  cplx det(1.0, 0.0);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double mag = std::abs(a[r * n + col]);
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (best == 0.0) return cplx(0.0, 0.0);
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[pivot * n + c], a[col * n + c]);
      det = -det;
    }
    det *= a[col * n + col];
    const cplx inv = 1.0 / a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const cplx factor = a[r * n + col] * inv;
      if (factor == cplx(0.0, 0.0)) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= factor * a[col * n + c];
    }
  }
  return det;
}

namespace {

std::string format_entry(cplx z) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gj", z.real(), z.imag());
  return buf;
}

cplx parse_entry(const std::string& token) {
  if (token.empty() || token.back() != 'j') {
    throw std::runtime_error("bad matrix entry '" + token + "'");
  }
  // Split at the sign of the imaginary part: the first +/- that is neither
  // leading nor an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < token.size(); ++i) {
    if ((token[i] == '+' || token[i] == '-') && token[i - 1] != 'e' &&
        token[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) {
    throw std::runtime_error("bad matrix entry '" + token + "'");
  }
  std::size_t used = 0;
  const std::string re_str = token.substr(0, split);
  const std::string im_str = token.substr(split, token.size() - split - 1);
  const double re = std::stod(re_str, &used);
  if (used != re_str.size()) {
    throw std::runtime_error("bad matrix entry '" + token + "'");
  }
  const double im = std::stod(im_str, &used);
  if (used != im_str.size()) {
    throw std::runtime_error("bad matrix entry '" + token + "'");
  }
  return {re, im};
}

}  // namespace

void write_matrix(std::ostream& os, const ComplexMatrix& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) os << ' ';
      os << format_entry(m.at(r, c));
    }
    os << '\n';
  }
}

ComplexMatrix read_matrix(std::istream& is) {
  std::size_t rows = 0, cols = 0;
  if (!(is >> rows >> cols) || rows == 0 || cols == 0) {
    throw std::runtime_error("bad matrix header");
  }
  std::vector<cplx> entries;
  entries.reserve(rows * cols);
  std::string token;
  for (std::size_t i = 0; i < rows * cols; ++i) {
    if (!(is >> token)) throw std::runtime_error("truncated matrix file");
    entries.push_back(parse_entry(token));
  }
  return ComplexMatrix(rows, cols, std::move(entries));
}

void write_matrix_file(const std::string& path, const ComplexMatrix& m) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write_matrix(f, m);
}

ComplexMatrix read_matrix_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_matrix(f);
}

}  // namespace seedsynth
