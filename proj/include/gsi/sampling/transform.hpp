#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "gsi/error.hpp"
#include "gsi/numeric.hpp"
#include "gsi/sampling/cholesky.hpp"
#include "gsi/sampling/normal.hpp"
#include "gsi/sampling/point_set.hpp"

namespace gsi::sampling {

// How the two numbers attached to a lognormal input are read.
enum class LognormalConvention {
  // (mu, sigma) of the underlying normal: x = exp(mu + sigma z).
  LogParameters,
  // arithmetic mean and standard deviation of x itself.
  Moments,
  // arithmetic mean of x and the standard deviation of ln x:
  // x = mean * exp(sigma z - sigma^2 / 2).
  MeanWithLogSigma,
};

inline const char* to_string(LognormalConvention c) {
  switch (c) {
    case LognormalConvention::LogParameters: return "log-parameters";
    case LognormalConvention::Moments: return "moments";
    case LognormalConvention::MeanWithLogSigma: return "mean-log-sigma";
  }
  return "?";
}

struct MarginalSpec {
  enum class Kind { Uniform, Normal, Lognormal };

  Kind kind = Kind::Uniform;
  double p1 = 0.0;  // a | mu | location value
  double p2 = 1.0;  // b | sigma | spread value
  LognormalConvention convention = LognormalConvention::LogParameters;

  static MarginalSpec uniform(double a, double b) {
    if (!(b > a)) throw InvalidArgument("uniform marginal requires b > a");
    return {Kind::Uniform, a, b};
  }
  static MarginalSpec normal(double mu, double sigma) {
    if (!(sigma > 0.0)) throw InvalidArgument("normal marginal requires sigma > 0");
    return {Kind::Normal, mu, sigma};
  }
  static MarginalSpec lognormal(double value, double spread, LognormalConvention c) {
    if (!(spread > 0.0)) throw InvalidArgument("lognormal marginal requires sigma > 0");
    if (c != LognormalConvention::LogParameters && !(value > 0.0))
      throw InvalidArgument("lognormal mean must be positive");
    return {Kind::Lognormal, value, spread, c};
  }

  // Parameters (mu, sigma) of ln x for a lognormal marginal.
  std::pair<double, double> log_parameters() const {
    switch (convention) {
      case LognormalConvention::LogParameters: return {p1, p2};
      case LognormalConvention::Moments: {
        const double s2 = std::log1p((p2 * p2) / (p1 * p1));
        return {std::log(p1) - 0.5 * s2, std::sqrt(s2)};
      }
      case LognormalConvention::MeanWithLogSigma: return {std::log(p1) - 0.5 * p2 * p2, p2};
    }
    return {p1, p2};
  }

  // Inverse CDF applied to u in (0,1) (u in [0,1) for Uniform).
  double quantile(double u) const {
    switch (kind) {
      case Kind::Uniform: return p1 + (p2 - p1) * u;
      case Kind::Normal: return p1 + p2 * inverse_normal_cdf(u);
      case Kind::Lognormal: {
        const auto [mu, sigma] = log_parameters();
        return std::exp(mu + sigma * inverse_normal_cdf(u));
      }
    }
    return 0.0;
  }

  double mean() const {
    switch (kind) {
      case Kind::Uniform: return 0.5 * (p1 + p2);
      case Kind::Normal: return p1;
      case Kind::Lognormal: {
        const auto [mu, sigma] = log_parameters();
        return std::exp(mu + 0.5 * sigma * sigma);
      }
    }
    return 0.0;
  }
};

// Maps columns [offset, offset + marginals.size()) of `u` through the
// marginals' inverse CDFs.
inline Matrix transform_independent_block(const UnitPointSet& u, std::span<const MarginalSpec> marginals,
                                          std::size_t offset) {
  const std::size_t d = marginals.size();
  if (offset + d > u.dims())
    throw InvalidArgument("point set has " + std::to_string(u.dims()) + " columns, need " +
                          std::to_string(offset + d));
  Matrix x(u.n(), d);
  for (std::size_t k = 0; k < u.n(); ++k)
    for (std::size_t j = 0; j < d; ++j) x(k, j) = marginals[j].quantile(u(k, offset + j));
  return x;
}

inline Matrix transform_independent(const UnitPointSet& u, std::span<const MarginalSpec> marginals) {
  if (marginals.size() != u.dims())
    throw InvalidArgument("point set dimension does not match the number of marginals");
  return transform_independent_block(u, marginals, 0);
}

// x = mean + L z with z the row of independent standard normals obtained from
// columns [offset, offset + d) of `u`, and L the Cholesky factor of cov.
inline Matrix transform_correlated_normal_block(const UnitPointSet& u, const CovarianceSpec& cov,
                                                const Matrix& chol, std::size_t offset) {
  const std::size_t d = cov.dims();
  if (offset + d > u.dims())
    throw InvalidArgument("point set has " + std::to_string(u.dims()) + " columns, need " +
                          std::to_string(offset + d));
  Matrix x(u.n(), d);
  std::vector<double> z(d);
  for (std::size_t k = 0; k < u.n(); ++k) {
    for (std::size_t j = 0; j < d; ++j) z[j] = inverse_normal_cdf(u(k, offset + j));
    for (std::size_t i = 0; i < d; ++i) {
      double s = cov.mean[i];
      for (std::size_t j = 0; j <= i; ++j) s += chol(i, j) * z[j];
      x(k, i) = s;
    }
  }
  return x;
}

inline Matrix transform_correlated_normal(const UnitPointSet& u, const CovarianceSpec& cov) {
  if (cov.dims() != u.dims()) throw InvalidArgument("point set dimension does not match the covariance dimension");
  return transform_correlated_normal_block(u, cov, cholesky_lower(cov), 0);
}

}  // namespace gsi::sampling
