#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>

#include "gsi/error.hpp"
#include "gsi/numeric.hpp"

namespace gsi::sampling {

// n x dims block of points in [0,1)^dims. Immutable once built.
class UnitPointSet {
 public:
  explicit UnitPointSet(Matrix values) : values_(std::move(values)) {
    if (values_.rows() == 0 || values_.cols() == 0)
      throw InvalidArgument("unit point set must have n > 0 and dims > 0");
    for (double v : values_.data())
      if (!(v >= 0.0 && v < 1.0)) throw InvalidArgument("unit point coordinate outside [0,1)");
  }

  std::size_t n() const noexcept { return values_.rows(); }
  std::size_t dims() const noexcept { return values_.cols(); }
  double operator()(std::size_t k, std::size_t j) const { return values_(k, j); }
  std::span<const double> row(std::size_t k) const { return values_.row(k); }
  const Matrix& values() const noexcept { return values_; }

  friend bool operator==(const UnitPointSet&, const UnitPointSet&) = default;

 private:
  Matrix values_;
};

enum class SamplerKind { MC, QMC };

inline const char* to_string(SamplerKind k) { return k == SamplerKind::MC ? "MC" : "QMC"; }

// MC: `seed` selects the pseudo-random stream.
// QMC: `run_index` selects the block of Sobol' points [1 + r*n, 1 + (r+1)*n).
struct SamplerSpec {
  SamplerKind kind = SamplerKind::QMC;
  std::uint64_t seed = 0;
  std::uint64_t run_index = 0;

  static SamplerSpec mc(std::uint64_t seed) { return {SamplerKind::MC, seed, 0}; }
  static SamplerSpec qmc(std::uint64_t run_index) { return {SamplerKind::QMC, 0, run_index}; }
};

}  // namespace gsi::sampling
