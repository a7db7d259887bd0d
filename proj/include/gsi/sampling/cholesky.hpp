#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gsi/error.hpp"
#include "gsi/numeric.hpp"

namespace gsi::sampling {

// Mean vector and covariance matrix of a multivariate normal input vector.
struct CovarianceSpec {
  std::vector<double> mean;
  Matrix cov;

  std::size_t dims() const noexcept { return mean.size(); }
};

// Lower-triangular L with L * L^T = C (Cholesky-Banachiewicz).
// Throws NotPositiveDefinite carrying the 1-based index of the first
// non-positive pivot.
inline Matrix cholesky_lower(const Matrix& c) {
  const std::size_t n = c.rows();
  if (n == 0 || c.cols() != n) throw InvalidArgument("covariance matrix must be square and non-empty");

  double scale = 0.0;
  for (double v : c.data()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(c(i, j) - c(j, i)) > 1e-12 * scale)
        throw InvalidArgument("covariance matrix is not symmetric");

  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = c(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0)) throw NotPositiveDefinite(j + 1);
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = c(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

inline Matrix cholesky_lower(const CovarianceSpec& spec) {
  if (spec.cov.rows() != spec.dims()) throw InvalidArgument("mean and covariance dimensions differ");
  return cholesky_lower(spec.cov);
}

}  // namespace gsi::sampling
