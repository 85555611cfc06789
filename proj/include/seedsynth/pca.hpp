#pragma once

#include <vector>

namespace seedsynth {

struct PcaResult {
  std::vector<double> cumulative;  // cumulative explained-variance ratios
  bool degenerate = false;         // total variance was (numerically) zero
};

// Mean-centers the samples, eigendecomposes the covariance (cyclic Jacobi)
// and returns cumulative explained-variance ratios, largest component first.
PcaResult pca_explained_variance(const std::vector<std::vector<double>>& samples);

}  // namespace seedsynth
