#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "optround/convex.hpp"
#include "optround/types.hpp"

namespace optround {

// Exhaustive ground truth over the floor/ceiling box for small instances.
// Error evaluation here is deliberately independent of the kernel layer so
// the oracle certifies the production path rather than mirroring it.

struct OracleResult {
  double min_value = 0.0;
  std::vector<IntegerAllocation> argmins;  // every global minimizer, in enumeration order
  std::size_t evaluated = 0;               // number of feasible box points visited
};

inline constexpr std::size_t kOracleMaxComponents = 20;
inline constexpr std::size_t kOracleMaxSeparableComponents = 12;

/// Visits every allocation in the floor/ceiling box whose sum equals the
/// target: exactly C(k, I) points, where k is the non-integer count.
void for_each_feasible(std::span<const double> values, std::int64_t target,
                       double snap_tolerance,
                       const std::function<void(std::span<const std::int64_t>)>& visit);

std::vector<std::vector<std::int64_t>> enumerate_feasible(
    std::span<const double> values, std::int64_t target,
    double snap_tolerance = kDefaultSnapTolerance);

/// Minimum L^q error and all argmins over the feasible box.
OracleResult brute_force_optima(std::span<const double> values, std::int64_t target, double q,
                                double snap_tolerance = kDefaultSnapTolerance);

/// Among the L^q argmins, the allocation with the smallest relative-error
/// sum; remaining ties resolved by the up-rounding priority order (larger
/// integer parts first, then lower index) so the result matches oric_round
/// exactly. Requires every value > 0.
IntegerAllocation brute_force_best_relative(std::span<const double> values, std::int64_t target,
                                            double q,
                                            double snap_tolerance = kDefaultSnapTolerance);

/// Exhaustive minimum of a separable objective over the feasible box around
/// the relaxed solution (at most 12 non-integer components).
OracleResult brute_force_separable(const SeparableObjective& objective,
                                   const RelaxedSolution& relaxed);

}  // namespace optround
