#include <immintrin.h>

#include "seedsynth/kernels.hpp"

// AVX2+FMA variants of the inner-loop kernels. Complex numbers stay in the
// interleaved re,im layout of std::complex<double>, two per 256-bit vector.
// Products use the fmaddsub / fmsubadd pattern:
//   prod = fmaddsub(dup_re(a), b, dup_im(a) * swap(b))
// which yields [ar*br - ai*bi, ar*bi + ai*br] per lane pair.

namespace seedsynth::kernels::avx2 {

bool supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

inline __m256d swap_pairs(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

// (gr + i*gi) * v for two complex lanes at once.
inline __m256d cmul_scalar_vec(__m256d gr, __m256d gi, __m256d v) {
  return _mm256_fmaddsub_pd(gr, v, _mm256_mul_pd(gi, swap_pairs(v)));
}

}  // namespace

void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t m,
            std::size_t k, std::size_t n) {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd = reinterpret_cast<double*>(c);
  for (std::size_t i = 0; i < 2 * m * n; ++i) cd[i] = 0.0;
  const std::size_t vec_end = (2 * n) & ~std::size_t(7);  // 4 complex per step
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = cd + 2 * i * n;
    for (std::size_t l = 0; l < k; ++l) {
      const __m256d ar = _mm256_set1_pd(ad[2 * (i * k + l)]);
      const __m256d ai = _mm256_set1_pd(ad[2 * (i * k + l) + 1]);
      const double* brow = bd + 2 * l * n;
      std::size_t j = 0;
      for (; j < vec_end; j += 8) {
        const __m256d b0 = _mm256_loadu_pd(brow + j);
        const __m256d b1 = _mm256_loadu_pd(brow + j + 4);
        const __m256d c0 = _mm256_loadu_pd(crow + j);
        const __m256d c1 = _mm256_loadu_pd(crow + j + 4);
        _mm256_storeu_pd(crow + j,
                         _mm256_add_pd(c0, cmul_scalar_vec(ar, ai, b0)));
        _mm256_storeu_pd(crow + j + 4,
                         _mm256_add_pd(c1, cmul_scalar_vec(ar, ai, b1)));
      }
      const double arr = ad[2 * (i * k + l)];
      const double aii = ad[2 * (i * k + l) + 1];
      for (; j < 2 * n; j += 2) {
        const double br = brow[j], bi = brow[j + 1];
        crow[j] += arr * br - aii * bi;
        crow[j + 1] += arr * bi + aii * br;
      }
    }
  }
}

void rotate_pair(cplx* x, cplx* y, std::size_t n, cplx g00, cplx g01, cplx g10,
                 cplx g11) {
  double* xd = reinterpret_cast<double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(g00.real()), ai = _mm256_set1_pd(g00.imag());
  const __m256d br = _mm256_set1_pd(g01.real()), bi = _mm256_set1_pd(g01.imag());
  const __m256d cr = _mm256_set1_pd(g10.real()), ci = _mm256_set1_pd(g10.imag());
  const __m256d dr = _mm256_set1_pd(g11.real()), di = _mm256_set1_pd(g11.imag());
  const std::size_t vec_end = (2 * n) & ~std::size_t(3);
  std::size_t j = 0;
  for (; j < vec_end; j += 4) {
    const __m256d xv = _mm256_loadu_pd(xd + j);
    const __m256d yv = _mm256_loadu_pd(yd + j);
    const __m256d nx = _mm256_add_pd(cmul_scalar_vec(ar, ai, xv),
                                     cmul_scalar_vec(br, bi, yv));
    const __m256d ny = _mm256_add_pd(cmul_scalar_vec(cr, ci, xv),
                                     cmul_scalar_vec(dr, di, yv));
    _mm256_storeu_pd(xd + j, nx);
    _mm256_storeu_pd(yd + j, ny);
  }
  for (; j < 2 * n; j += 2) {
    const double xr = xd[j], xi = xd[j + 1];
    const double yr = yd[j], yi = yd[j + 1];
    xd[j] = g00.real() * xr - g00.imag() * xi + g01.real() * yr - g01.imag() * yi;
    xd[j + 1] =
        g00.real() * xi + g00.imag() * xr + g01.real() * yi + g01.imag() * yr;
    yd[j] = g10.real() * xr - g10.imag() * xi + g11.real() * yr - g11.imag() * yi;
    yd[j + 1] =
        g10.real() * xi + g10.imag() * xr + g11.real() * yi + g11.imag() * yr;
  }
}

cplx cdotu(const cplx* a, const cplx* b, std::size_t n) {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t vec_end = (2 * n) & ~std::size_t(3);
  std::size_t j = 0;
  for (; j < vec_end; j += 4) {
    const __m256d av = _mm256_loadu_pd(ad + j);
    const __m256d bv = _mm256_loadu_pd(bd + j);
    const __m256d prod = _mm256_fmaddsub_pd(
        _mm256_movedup_pd(av), bv,
        _mm256_mul_pd(_mm256_permute_pd(av, 0b1111), swap_pairs(bv)));
    acc = _mm256_add_pd(acc, prod);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double re = lanes[0] + lanes[2];
  double im = lanes[1] + lanes[3];
  for (; j < 2 * n; j += 2) {
    const double ar = ad[j], ai = ad[j + 1];
    const double br = bd[j], bi = bd[j + 1];
    re += ar * br - ai * bi;
    im += ar * bi + ai * br;
  }
  return {re, im};
}

cplx cdotc(const cplx* a, const cplx* b, std::size_t n) {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t vec_end = (2 * n) & ~std::size_t(3);
  std::size_t j = 0;
  for (; j < vec_end; j += 4) {
    const __m256d av = _mm256_loadu_pd(ad + j);
    const __m256d bv = _mm256_loadu_pd(bd + j);
    const __m256d prod = _mm256_fmsubadd_pd(
        _mm256_movedup_pd(av), bv,
        _mm256_mul_pd(_mm256_permute_pd(av, 0b1111), swap_pairs(bv)));
    acc = _mm256_add_pd(acc, prod);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double re = lanes[0] + lanes[2];
  double im = lanes[1] + lanes[3];
  for (; j < 2 * n; j += 2) {
    const double ar = ad[j], ai = ad[j + 1];
    const double br = bd[j], bi = bd[j + 1];
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  const std::size_t vec_end = n & ~std::size_t(7);
  std::size_t j = 0;
  for (; j < vec_end; j += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + j + 4), _mm256_loadu_pd(b + j + 4),
                           acc1);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc0);
  double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; j < n; ++j) s += a[j] * b[j];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(alpha);
  const std::size_t vec_end = n & ~std::size_t(3);
  std::size_t j = 0;
  for (; j < vec_end; j += 4) {
    _mm256_storeu_pd(
        y + j, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + j), _mm256_loadu_pd(y + j)));
  }
  for (; j < n; ++j) y[j] += alpha * x[j];
}

}  // namespace seedsynth::kernels::avx2
