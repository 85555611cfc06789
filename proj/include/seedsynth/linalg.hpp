#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "seedsynth/matrix.hpp"

namespace seedsynth {

// sqrt(Tr(A'A)), i.e. the Frobenius norm. The squared form is exposed
// separately since thresholds are usually stated against it.
double hs_norm(const ComplexMatrix& a);
double hs_norm_sq(const ComplexMatrix& a);

// 1 - |Tr(U'V)|/N. Zero iff V equals U up to a global phase; this is the
// cost every instantiation and verification step in the toolkit minimizes.
double phase_invariant_distance(const UnitaryMatrix& u, const UnitaryMatrix& v);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Haar-distributed unitary: QR of a complex Gaussian matrix with the R
// diagonal phases folded back into Q. Deterministic per seed.
UnitaryMatrix random_unitary(std::size_t n_qubits, std::uint64_t rng_seed);

// ceil((4^n - 3n - 1) / 4): CNOTs sufficient for an arbitrary n-qubit unitary.
std::uint64_t max_cnots(std::size_t n_qubits);

cplx determinant(const ComplexMatrix& m);

// Text format: first line "N N", then N rows of N whitespace-separated
// entries "re+imj", written with 17 significant digits.
void write_matrix(std::ostream& os, const ComplexMatrix& m);
ComplexMatrix read_matrix(std::istream& is);
void write_matrix_file(const std::string& path, const ComplexMatrix& m);
ComplexMatrix read_matrix_file(const std::string& path);

}  // namespace seedsynth
