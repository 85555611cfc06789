#include "seedsynth/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace seedsynth {

namespace {

// Cyclic Jacobi sweeps for a symmetric matrix, eigenvalues only.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    }
    double diag = 0.0;
    for (std::size_t p = 0; p < n; ++p) diag += a[p * n + p] * a[p * n + p];
    if (off <= 1e-24 * std::max(diag, 1e-300)) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a[i * n + p];
          const double aiq = a[i * n + q];
          a[i * n + p] = c * aip - s * aiq;
          a[i * n + q] = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double api = a[p * n + i];
          const double aqi = a[q * n + i];
          a[p * n + i] = c * api - s * aqi;
          a[q * n + i] = s * api + c * aqi;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a[i * n + i];
  return eig;
}

}  // namespace

PcaResult pca_explained_variance(
    const std::vector<std::vector<double>>& samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument("pca needs at least two samples");
  }
  const std::size_t d = samples.front().size();
  for (const auto& s : samples) {
    if (s.size() != d) {
      throw std::invalid_argument("pca samples must share a dimension");
    }
  }
  const double m = static_cast<double>(samples.size());

  std::vector<double> mean(d, 0.0);
  for (const auto& s : samples) {
    for (std::size_t i = 0; i < d; ++i) mean[i] += s[i];
  }
  for (double& v : mean) v /= m;

  std::vector<double> cov(d * d, 0.0);
  std::vector<double> centered(d);
  for (const auto& s : samples) {
    for (std::size_t i = 0; i < d; ++i) centered[i] = s[i] - mean[i];
    for (std::size_t i = 0; i < d; ++i) {
      const double ci = centered[i];
      if (ci == 0.0) continue;
      for (std::size_t j = i; j < d; ++j) cov[i * d + j] += ci * centered[j];
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov[i * d + j] /= m - 1.0;
      cov[j * d + i] = cov[i * d + j];
    }
  }

  std::vector<double> eig = symmetric_eigenvalues(std::move(cov), d);
  for (double& v : eig) v = std::max(v, 0.0);  // clip rounding negatives
  std::sort(eig.begin(), eig.end(), std::greater<>());

  PcaResult result;
  const double total = std::accumulate(eig.begin(), eig.end(), 0.0);
  result.cumulative.resize(d);
  if (total <= 1e-300) {
    result.degenerate = true;
    std::fill(result.cumulative.begin(), result.cumulative.end(), 0.0);
    return result;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    acc += eig[i];
    result.cumulative[i] = acc / total;
  }
  return result;
}

}  // namespace seedsynth
