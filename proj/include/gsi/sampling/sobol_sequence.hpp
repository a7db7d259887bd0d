#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gsi/error.hpp"
#include "gsi/sampling/direction_numbers.hpp"

namespace gsi::sampling {

// Unscrambled Sobol' sequence in up to kMaxSobolDims dimensions, 32-bit
// resolution, Gray-code ordering (Antonov-Saleev). Element 0 is the origin;
// callers that need open-interval points start from element 1.
class SobolSequence {
 public:
  static constexpr unsigned kBits = 32;

  explicit SobolSequence(std::size_t dims) : dims_(dims), directions_(dims * kBits), state_(dims, 0) {
    if (dims == 0) throw InvalidArgument("Sobol' sequence needs at least one dimension");
    if (dims > kMaxSobolDims)
      throw InvalidArgument("Sobol' sequence supports at most " + std::to_string(kMaxSobolDims) +
                            " dimensions, requested " + std::to_string(dims));
    for (unsigned k = 0; k < kBits; ++k) direction(0, k) = std::uint32_t{1} << (kBits - 1 - k);
    for (std::size_t j = 1; j < dims; ++j) init_dimension(j, kJoeKuoDirections[j - 1]);
  }

  std::size_t dims() const noexcept { return dims_; }
  std::uint64_t index() const noexcept { return index_; }

  // Position the generator so that the next call to next() returns element `index`.
  void seek(std::uint64_t index) {
    if (index >= (std::uint64_t{1} << kBits))
      throw InvalidArgument("Sobol' index exceeds 2^32 elements");
    const std::uint64_t gray = index ^ (index >> 1);
    for (std::size_t j = 0; j < dims_; ++j) {
      std::uint32_t x = 0;
      for (unsigned k = 0; k < kBits; ++k)
        if ((gray >> k) & 1u) x ^= direction(j, k);
      state_[j] = x;
    }
    index_ = index;
  }

  // Writes the current element into `out` and advances by one.
  void next(std::span<double> out) {
    constexpr double kScale = 1.0 / 4294967296.0;
    for (std::size_t j = 0; j < dims_; ++j) out[j] = static_cast<double>(state_[j]) * kScale;
    ++index_;
    if (index_ >= (std::uint64_t{1} << kBits)) return;
    const unsigned c = static_cast<unsigned>(std::countr_zero(index_));
    for (std::size_t j = 0; j < dims_; ++j) state_[j] ^= direction(j, c);
  }

 private:
  std::uint32_t& direction(std::size_t j, unsigned k) { return directions_[j * kBits + k]; }

  void init_dimension(std::size_t j, const DirectionEntry& e) {
    const unsigned s = e.degree;
    std::vector<std::uint32_t> v(kBits);
    for (unsigned k = 0; k < s && k < kBits; ++k) v[k] = e.m[k] << (kBits - 1 - k);
    for (unsigned k = s; k < kBits; ++k) {
      v[k] = v[k - s] ^ (v[k - s] >> s);
      for (unsigned l = 1; l < s; ++l)
        if ((e.coeffs >> (s - 1 - l)) & 1u) v[k] ^= v[k - l];
    }
    for (unsigned k = 0; k < kBits; ++k) direction(j, k) = v[k];
  }

  std::size_t dims_;
  std::vector<std::uint32_t> directions_;
  std::vector<std::uint32_t> state_;
  std::uint64_t index_ = 0;
};

}  // namespace gsi::sampling
