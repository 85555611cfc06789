#include "seedsynth/kernels.hpp"

#include <cstdlib>

namespace seedsynth::kernels {

// std::complex operator* routes through __muldc3 for NaN handling, which is
// far too slow for the inner loops here; all kernels work on the real parts
// directly.

namespace scalar {

void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t m,
            std::size_t k, std::size_t n) {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd = reinterpret_cast<double*>(c);
  for (std::size_t i = 0; i < 2 * m * n; ++i) cd[i] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t l = 0; l < k; ++l) {
      const double ar = ad[2 * (i * k + l)];
      const double ai = ad[2 * (i * k + l) + 1];
      const double* brow = bd + 2 * l * n;
      double* crow = cd + 2 * i * n;
      for (std::size_t j = 0; j < n; ++j) {
        const double br = brow[2 * j];
        const double bi = brow[2 * j + 1];
        crow[2 * j] += ar * br - ai * bi;
        crow[2 * j + 1] += ar * bi + ai * br;
      }
    }
  }
}

void rotate_pair(cplx* x, cplx* y, std::size_t n, cplx g00, cplx g01, cplx g10,
                 cplx g11) {
  double* xd = reinterpret_cast<double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const double a_r = g00.real(), a_i = g00.imag();
  const double b_r = g01.real(), b_i = g01.imag();
  const double c_r = g10.real(), c_i = g10.imag();
  const double d_r = g11.real(), d_i = g11.imag();
  for (std::size_t j = 0; j < n; ++j) {
    const double xr = xd[2 * j], xi = xd[2 * j + 1];
    const double yr = yd[2 * j], yi = yd[2 * j + 1];
    xd[2 * j] = a_r * xr - a_i * xi + b_r * yr - b_i * yi;
    xd[2 * j + 1] = a_r * xi + a_i * xr + b_r * yi + b_i * yr;
    yd[2 * j] = c_r * xr - c_i * xi + d_r * yr - d_i * yi;
    yd[2 * j + 1] = c_r * xi + c_i * xr + d_r * yi + d_i * yr;
  }
}

cplx cdotu(const cplx* a, const cplx* b, std::size_t n) {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double ar = ad[2 * j], ai = ad[2 * j + 1];
    const double br = bd[2 * j], bi = bd[2 * j + 1];
    re += ar * br - ai * bi;
    im += ar * bi + ai * br;
  }
  return {re, im};
}

cplx cdotc(const cplx* a, const cplx* b, std::size_t n) {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double ar = ad[2 * j], ai = ad[2 * j + 1];
    const double br = bd[2 * j], bi = bd[2 * j + 1];
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += a[j] * b[j];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) y[j] += alpha * x[j];
}

}  // namespace scalar

#if defined(SEEDSYNTH_HAVE_AVX2_SOURCES)
namespace avx2 {
bool supported();
void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t m,
            std::size_t k, std::size_t n);
void rotate_pair(cplx* x, cplx* y, std::size_t n, cplx g00, cplx g01, cplx g10,
                 cplx g11);
cplx cdotu(const cplx* a, const cplx* b, std::size_t n);
cplx cdotc(const cplx* a, const cplx* b, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace avx2
#endif

namespace {

struct DispatchTable {
  void (*matmul)(const cplx*, const cplx*, cplx*, std::size_t, std::size_t,
                 std::size_t);
  void (*rotate_pair)(cplx*, cplx*, std::size_t, cplx, cplx, cplx, cplx);
  cplx (*cdotu)(const cplx*, const cplx*, std::size_t);
  cplx (*cdotc)(const cplx*, const cplx*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
};

constexpr DispatchTable kScalarTable = {
    scalar::matmul, scalar::rotate_pair, scalar::cdotu,
    scalar::cdotc,  scalar::dot,         scalar::axpy,
};

#if defined(SEEDSYNTH_HAVE_AVX2_SOURCES)
constexpr DispatchTable kAvx2Table = {
    avx2::matmul, avx2::rotate_pair, avx2::cdotu,
    avx2::cdotc,  avx2::dot,         avx2::axpy,
};
#endif

bool avx2_available() {
#if defined(SEEDSYNTH_HAVE_AVX2_SOURCES)
  return avx2::supported();
#else
  return false;
#endif
}

Isa pick_startup_isa() {
  if (std::getenv("SEEDSYNTH_FORCE_SCALAR") != nullptr) return Isa::scalar;
  return avx2_available() ? Isa::avx2 : Isa::scalar;
}

Isa g_active = pick_startup_isa();
const DispatchTable* g_table =
#if defined(SEEDSYNTH_HAVE_AVX2_SOURCES)
    g_active == Isa::avx2 ? &kAvx2Table : &kScalarTable;
#else
    &kScalarTable;
#endif

}  // namespace

Isa active() { return g_active; }

bool force(Isa isa) {
  if (isa == Isa::avx2) {
    if (!avx2_available()) return false;
#if defined(SEEDSYNTH_HAVE_AVX2_SOURCES)
    g_table = &kAvx2Table;
#endif
  } else {
    g_table = &kScalarTable;
  }
  g_active = isa;
  return true;
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::avx2:
      return "avx2";
    case Isa::scalar:
      return "scalar";
  }
  return "unknown";
}

void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t m,
            std::size_t k, std::size_t n) {
  g_table->matmul(a, b, c, m, k, n);
}

void rotate_pair(cplx* x, cplx* y, std::size_t n, cplx g00, cplx g01, cplx g10,
                 cplx g11) {
  g_table->rotate_pair(x, y, n, g00, g01, g10, g11);
}

cplx cdotu(const cplx* a, const cplx* b, std::size_t n) {
  return g_table->cdotu(a, b, n);
}

cplx cdotc(const cplx* a, const cplx* b, std::size_t n) {
  return g_table->cdotc(a, b, n);
}

double dot(const double* a, const double* b, std::size_t n) {
  return g_table->dot(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  g_table->axpy(alpha, x, y, n);
}

}  // namespace seedsynth::kernels
