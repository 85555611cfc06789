#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <vector>

#include "seedsynth/kernels.hpp"
#include "seedsynth/rng.hpp"

using namespace seedsynth;
using kernels::cplx;

namespace {

std::vector<cplx> random_cvec(Rng& rng, std::size_t n) {
  std::vector<cplx> v(n);
  for (cplx& z : v) z = cplx(rng.normal(), rng.normal());
  return v;
}

std::vector<double> random_dvec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

}  // namespace

TEST_CASE("scalar matmul multiplies complex matrices") {
  // 2x2 known product: [[1,i],[0,2]] * [[1,0],[1,1]] = [[1+i, i],[2, 2]]
  const std::vector<cplx> a{{1, 0}, {0, 1}, {0, 0}, {2, 0}};
  const std::vector<cplx> b{{1, 0}, {0, 0}, {1, 0}, {1, 0}};
  std::vector<cplx> c(4);
  kernels::scalar::matmul(a.data(), b.data(), c.data(), 2, 2, 2);
  CHECK(std::abs(c[0] - cplx(1, 1)) < 1e-15);
  CHECK(std::abs(c[1] - cplx(0, 1)) < 1e-15);
  CHECK(std::abs(c[2] - cplx(2, 0)) < 1e-15);
  CHECK(std::abs(c[3] - cplx(2, 0)) < 1e-15);
}

TEST_CASE("scalar rotate_pair matches direct 2x2 action") {
  Rng rng(11);
  std::vector<cplx> x = random_cvec(rng, 5);
  std::vector<cplx> y = random_cvec(rng, 5);
  const std::vector<cplx> x0 = x, y0 = y;
  const cplx g00(0.3, -0.2), g01(1.1, 0.4), g10(-0.7, 0.9), g11(0.0, 1.0);
  kernels::scalar::rotate_pair(x.data(), y.data(), 5, g00, g01, g10, g11);
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(std::abs(x[j] - (g00 * x0[j] + g01 * y0[j])) < 1e-14);
    CHECK(std::abs(y[j] - (g10 * x0[j] + g11 * y0[j])) < 1e-14);
  }
}

TEST_CASE("scalar dots agree with naive sums") {
  Rng rng(12);
  const auto a = random_cvec(rng, 37);
  const auto b = random_cvec(rng, 37);
  cplx du(0, 0), dc(0, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    du += a[i] * b[i];
    dc += std::conj(a[i]) * b[i];
  }
  CHECK(std::abs(kernels::scalar::cdotu(a.data(), b.data(), a.size()) - du) <
        1e-12);
  CHECK(std::abs(kernels::scalar::cdotc(a.data(), b.data(), a.size()) - dc) <
        1e-12);
}

TEST_CASE("dispatched kernels are equivalent to the scalar reference") {
  const bool have_avx2 = kernels::force(kernels::Isa::avx2);
  if (!have_avx2) {
    MESSAGE("avx2 unavailable; dispatch equivalence trivially scalar");
    CHECK(kernels::active() == kernels::Isa::scalar);
    return;
  }

  Rng rng(13);
  // Sizes chosen to exercise both the vector body and the scalar tails.
  for (const std::size_t n : {1, 2, 3, 4, 5, 7, 8, 16, 31, 64}) {
    const auto a = random_cvec(rng, n * n);
    const auto b = random_cvec(rng, n * n);

    std::vector<cplx> c_scalar(n * n), c_simd(n * n);
    kernels::scalar::matmul(a.data(), b.data(), c_scalar.data(), n, n, n);
    kernels::matmul(a.data(), b.data(), c_simd.data(), n, n, n);
    CHECK(max_abs_diff(c_scalar, c_simd) < 1e-11 * static_cast<double>(n));

    auto x_scalar = a, x_simd = a;
    auto y_scalar = b, y_simd = b;
    const cplx g00(0.6, 0.1), g01(-0.2, 0.8), g10(0.8, -0.2), g11(-0.1, -0.6);
    kernels::scalar::rotate_pair(x_scalar.data(), y_scalar.data(), n * n, g00,
                                 g01, g10, g11);
    kernels::rotate_pair(x_simd.data(), y_simd.data(), n * n, g00, g01, g10,
                         g11);
    CHECK(max_abs_diff(x_scalar, x_simd) < 1e-12);
    CHECK(max_abs_diff(y_scalar, y_simd) < 1e-12);

    CHECK(std::abs(kernels::cdotu(a.data(), b.data(), n * n) -
                   kernels::scalar::cdotu(a.data(), b.data(), n * n)) <
          1e-11 * static_cast<double>(n));
    CHECK(std::abs(kernels::cdotc(a.data(), b.data(), n * n) -
                   kernels::scalar::cdotc(a.data(), b.data(), n * n)) <
          1e-11 * static_cast<double>(n));

    const auto dx = random_dvec(rng, 2 * n + 3);
    const auto dy = random_dvec(rng, 2 * n + 3);
    CHECK(kernels::dot(dx.data(), dy.data(), dx.size()) ==
          doctest::Approx(kernels::scalar::dot(dx.data(), dy.data(), dx.size()))
              .epsilon(1e-12));

    auto ys = dy, yv = dy;
    kernels::scalar::axpy(0.37, dx.data(), ys.data(), dx.size());
    kernels::axpy(0.37, dx.data(), yv.data(), dx.size());
    for (std::size_t i = 0; i < ys.size(); ++i) {
      CHECK(ys[i] == doctest::Approx(yv[i]).epsilon(1e-13));
    }
  }
  kernels::force(kernels::Isa::avx2);
}

TEST_CASE("force scalar switches the active table") {
  const kernels::Isa before = kernels::active();
  REQUIRE(kernels::force(kernels::Isa::scalar));
  CHECK(kernels::active() == kernels::Isa::scalar);
  kernels::force(before);
}
