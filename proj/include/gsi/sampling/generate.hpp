#pragma once

#include <string>

#include "gsi/error.hpp"
#include "gsi/numeric.hpp"
#include "gsi/sampling/point_set.hpp"
#include "gsi/sampling/random.hpp"
#include "gsi/sampling/sobol_sequence.hpp"

namespace gsi::sampling {

// n points in [0,1)^dims.
//
// QMC returns Sobol' elements with global indices [1 + r*n, 1 + (r+1)*n)
// where r = spec.run_index; the all-zeros element 0 is never returned, so
// every coordinate is strictly inside (0,1). n must be a power of two.
//
// MC fills the matrix row by row from UniformStream(spec.seed).
inline UnitPointSet generate_uniform(const SamplerSpec& spec, std::size_t n, std::size_t dims) {
  if (n == 0 || dims == 0) throw InvalidArgument("generate_uniform requires n > 0 and dims > 0");
  Matrix values(n, dims);
  if (spec.kind == SamplerKind::QMC) {
    if (!is_power_of_two(n))
      throw InvalidArgument("QMC sampling requires N = 2^p, got N = " + std::to_string(n));
    if (spec.run_index >= ((std::uint64_t{1} << SobolSequence::kBits) - 1) / n)
      throw InvalidArgument("QMC run index " + std::to_string(spec.run_index) +
                            " runs past the end of the 2^32-element sequence");
    SobolSequence seq(dims);
    seq.seek(1 + spec.run_index * n);
    for (std::size_t k = 0; k < n; ++k) seq.next(values.row(k));
  } else {
    UniformStream stream(spec.seed);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < dims; ++j) values(k, j) = stream();
  }
  return UnitPointSet(std::move(values));
}

}  // namespace gsi::sampling
