#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "optround/errors.hpp"

namespace optround {

/// Default absolute tolerance below which a value counts as an exact integer.
inline constexpr double kDefaultSnapTolerance = 1e-9;

/// Largest vector sum for which integer bookkeeping in doubles stays exact.
inline constexpr double kMaxExactSum = 9.0e15;

/// A validated non-negative vector whose snapped sum equals an integer target.
///
/// Construction snaps every entry that lies within `snap_tolerance` of an
/// integer (negatives within tolerance become zero), derives the target as the
/// integer nearest to the snapped sum, and rejects inputs whose sum is farther
/// than N * snap_tolerance from any integer.
class RoundingProblem {
 public:
  explicit RoundingProblem(std::span<const double> raw_values,
                           double snap_tolerance = kDefaultSnapTolerance);

  std::span<const double> values() const noexcept { return values_; }
  std::int64_t target() const noexcept { return target_; }
  double snap_tolerance() const noexcept { return snap_tolerance_; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
  std::int64_t target_ = 0;
  double snap_tolerance_ = kDefaultSnapTolerance;
};

struct DecompositionEntry {
  std::size_t index = 0;
  std::int64_t floor_part = 0;
  double frac_part = 0.0;  // in [0, 1); exactly 0 for snapped integers
};

/// Per-component (floor, fractional part) split, in input order.
struct ComponentDecomposition {
  std::vector<DecompositionEntry> entries;
};

/// Non-negative integer vector whose sum equals the stated target exactly.
class IntegerAllocation {
 public:
  IntegerAllocation(std::vector<std::int64_t> values, std::int64_t target);

  std::span<const std::int64_t> values() const noexcept { return values_; }
  std::int64_t target() const noexcept { return target_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::int64_t operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const IntegerAllocation&, const IntegerAllocation&) = default;

 private:
  std::vector<std::int64_t> values_;
  std::int64_t target_ = 0;
};

/// Error functionals of one allocation against the input vector.
/// The relative metrics are defined only when every input entry is positive.
struct ErrorReport {
  double q = 2.0;
  double lq_error = 0.0;
  std::optional<double> relative_sum;
  std::optional<double> relative_product;
};

}  // namespace optround
