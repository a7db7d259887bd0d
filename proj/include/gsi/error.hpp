#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gsi {

// Bad argument or violated precondition (wrong size, N not a power of two, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Estimator kind cannot be applied to the model (e.g. direct formula on
// dependent inputs).
class IncompatibleEstimator : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Estimated total variance is not positive.
class DegenerateVariance : public std::runtime_error {
 public:
  DegenerateVariance() : std::runtime_error("degenerate model (zero variance)") {}
};

class NotPositiveDefinite : public std::runtime_error {
 public:
  explicit NotPositiveDefinite(std::size_t pivot)
      : std::runtime_error("matrix is not positive definite (failing pivot " +
                           std::to_string(pivot) + ")"),
        pivot_(pivot) {}

  // 1-based index of the first non-positive pivot.
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

}  // namespace gsi
