#pragma once

#include <cstdint>
#include <iterator>
#include <random>

namespace gsi::sampling {

// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Seed for replicate `run` of an experiment with master seed `master`.
// Distinct (master, run) pairs map to well separated 64-bit seeds.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run) noexcept {
  return splitmix64(splitmix64(master) ^ (0xD1B54A32D192ED03ull * (run + 1)));
}

// Pseudo-random uniform stream on (0,1): MT19937-64 seeded through
// std::seed_seq with four SplitMix64 words of `seed`. Each draw takes the top
// 53 bits and returns the cell midpoint, so 0 and 1 never occur.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) {
    std::uint64_t s = seed;
    std::uint32_t words[8];
    for (int i = 0; i < 4; ++i) {
      s = splitmix64(s);
      words[2 * i] = static_cast<std::uint32_t>(s);
      words[2 * i + 1] = static_cast<std::uint32_t>(s >> 32);
    }
    std::seed_seq seq(std::begin(words), std::end(words));
    engine_.seed(seq);
  }

  double operator()() {
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gsi::sampling
