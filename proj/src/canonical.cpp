#include "seedsynth/canonical.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "seedsynth/linalg.hpp"

namespace seedsynth {

namespace {

constexpr double kNonzeroTol = 1e-8;

double wrap_to_2pi(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(angle, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w = 0.0;
  return w;
}

}  // namespace

CanonicalUnitary::CanonicalUnitary(UnitaryMatrix matrix, double source_phase)
    : matrix_(std::move(matrix)), source_phase_(source_phase) {
  const std::size_t n = matrix_.dim();
  const cplx det = determinant(matrix_.matrix());
  if (std::abs(det - cplx(1.0, 0.0)) > 1e-9) {
    throw std::invalid_argument("canonical representative must have det 1");
  }
  const auto [r, c] = first_nonzero_index(matrix_.matrix(), kNonzeroTol);
  const double window = 2.0 * std::numbers::pi / static_cast<double>(n);
  const double arg = wrap_to_2pi(std::arg(matrix_.at(r, c)));
  // Entries sitting numerically on the window edge wrap to ~2*pi; accept
  // both ends of the half-open interval.
  if (arg >= window && std::abs(arg - 2.0 * std::numbers::pi) > 1e-9 &&
      std::abs(arg - window) > 1e-9) {
    throw std::invalid_argument(
        "first nonzero entry argument outside canonical window");
  }
}

std::pair<std::size_t, std::size_t> first_nonzero_index(const ComplexMatrix& m,
                                                        double tol) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (std::abs(m.at(r, c)) > tol) return {r, c};
    }
  }
  throw std::invalid_argument("matrix has no entry above tolerance");
}

CanonicalUnitary canonicalize(const UnitaryMatrix& u) {
  const std::size_t n = u.dim();
  constexpr double two_pi = 2.0 * std::numbers::pi;

  // Step 1: divide out the principal N-th root of det(U), landing in SU(N).
  const cplx det = determinant(u.matrix());
  const double root_phase = std::arg(det) / static_cast<double>(n);
  const cplx root = std::polar(std::pow(std::abs(det), 1.0 / n), root_phase);
  ComplexMatrix v = u.matrix();
  v *= cplx(1.0, 0.0) / root;

  // Step 2: of the N special unitaries e^{-i 2 pi k / N} V, pick the one
  // whose first nonzero entry has principal argument in [0, 2*pi/N).
  const auto [r, c] = first_nonzero_index(v, kNonzeroTol);
  const double window = two_pi / static_cast<double>(n);
  const double arg = wrap_to_2pi(std::arg(v.at(r, c)));
  const auto k = static_cast<std::size_t>(arg / window) % n;
  const cplx shift = std::polar(1.0, -window * static_cast<double>(k));
  v *= shift;

  const double source_phase = root_phase + window * static_cast<double>(k);
  return CanonicalUnitary(UnitaryMatrix(std::move(v)), source_phase);
}

std::vector<double> feature_vector(const CanonicalUnitary& c) {
  const ComplexMatrix& m = c.matrix().matrix();
  std::vector<double> out;
  out.reserve(2 * m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    out.push_back(m.data()[i].real());
    out.push_back(m.data()[i].imag());
  }
  return out;
}

UnitaryMatrix unitary_from_features(const std::vector<double>& features,
                                    std::size_t dim) {
  if (features.size() < 2 * dim * dim) {
    throw std::invalid_argument("feature vector too short for dimension");
  }
  std::vector<cplx> entries(dim * dim);
  for (std::size_t i = 0; i < dim * dim; ++i) {
    entries[i] = cplx(features[2 * i], features[2 * i + 1]);
  }
  return UnitaryMatrix(ComplexMatrix(dim, dim, std::move(entries)));
}

}  // namespace seedsynth
