#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "seedsynth/matrix.hpp"

namespace seedsynth {

// Special-unitary representative of a unitary, unique across global phases:
// det == 1 and the principal argument of the first nonzero entry (row-major
// scan) lies in [0, 2*pi/N). Any two inputs differing only by a global phase
// map to the same matrix.
class CanonicalUnitary {
 public:
  CanonicalUnitary(UnitaryMatrix matrix, double source_phase);

  const UnitaryMatrix& matrix() const { return matrix_; }
  // Global phase removed from the input, in radians: input = e^{i*phase} * rep.
  double source_phase() const { return source_phase_; }

 private:
  UnitaryMatrix matrix_;
  double source_phase_;
};

CanonicalUnitary canonicalize(const UnitaryMatrix& u);

// Row-major-first entry with magnitude above tol. Throws if none exists.
std::pair<std::size_t, std::size_t> first_nonzero_index(const ComplexMatrix& m,
                                                        double tol);

// Row-major interleaved [Re(u00), Im(u00), Re(u01), ...]; length 2N^2
// (128 for three qubits). The recommender's input representation.
std::vector<double> feature_vector(const CanonicalUnitary& c);

// Inverse of feature_vector's flattening; dim entries must form a unitary.
UnitaryMatrix unitary_from_features(const std::vector<double>& features,
                                    std::size_t dim);

}  // namespace seedsynth
