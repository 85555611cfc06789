#pragma once

#include <complex>
#include <cstddef>

namespace seedsynth::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

// ISA selected at startup (cpuid on x86, scalar elsewhere). force() switches
// the dispatch table, returning false if the requested ISA is unavailable;
// the SEEDSYNTH_FORCE_SCALAR environment variable pins scalar at startup.
Isa active();
bool force(Isa isa);
const char* isa_name(Isa isa);

// c = a * b for row-major matrices, a: m x k, b: k x n. c must not alias.
void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t m,
            std::size_t k, std::size_t n);

// In-place 2x2 complex rotation of a row pair:
//   (x, y) <- (g00*x + g01*y, g10*x + g11*y)
void rotate_pair(cplx* x, cplx* y, std::size_t n, cplx g00, cplx g01, cplx g10,
                 cplx g11);

cplx cdotu(const cplx* a, const cplx* b, std::size_t n);  // sum a_i * b_i
cplx cdotc(const cplx* a, const cplx* b, std::size_t n);  // sum conj(a_i) * b_i

double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);

// Scalar reference implementations, always available; the dispatched entry
// points above must agree with these to rounding error. Equivalence is
// enforced by tests/test_kernels.cpp.
namespace scalar {
void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t m,
            std::size_t k, std::size_t n);
void rotate_pair(cplx* x, cplx* y, std::size_t n, cplx g00, cplx g01, cplx g10,
                 cplx g11);
cplx cdotu(const cplx* a, const cplx* b, std::size_t n);
cplx cdotc(const cplx* a, const cplx* b, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

}  // namespace seedsynth::kernels
