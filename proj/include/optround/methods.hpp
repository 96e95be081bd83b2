#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "optround/types.hpp"

namespace optround {

/// Result of threshold rounding. The allocation always lies in the
/// floor/ceiling box, but its sum may miss the target; that miss is the
/// quantity of interest.
struct FractionalOutcome {
  std::vector<std::int64_t> allocation;
  std::int64_t sum_deviation = 0;  // sum(allocation) - target
  std::size_t below_count = 0;     // components with fractional part <= threshold
};

/// Rounds component i down iff its fractional part is <= threshold (closed on
/// the down side), up otherwise. Threshold must lie in [0, 1).
FractionalOutcome fractional_round(const RoundingProblem& problem, double threshold);

/// The canonical threshold that makes fractional_round conserve the sum: the
/// (I+1)-th largest fractional part, where I is the shortfall. Returns empty
/// when the I-th and (I+1)-th largest fractional parts tie, in which case no
/// fixed threshold conserves the sum.
std::optional<double> feasible_threshold(const RoundingProblem& problem);

/// Independently rounds component i up with probability equal to its
/// fractional part. The sum is NOT guaranteed to hit the target. Draws are a
/// deterministic function of (seed, trial, component index).
std::vector<std::int64_t> randomized_round(const RoundingProblem& problem, std::uint64_t seed,
                                           std::uint64_t trial = 0);

/// Exact law of randomized rounding, by enumeration of all 2^k outcomes over
/// the k non-integer components (k <= 20).
struct ExactDistribution {
  double feasibility_probability = 1.0;   // P(sum == target)
  double optimality_probability = 1.0;    // P(outcome == optimal)
  double conditional_non_optimality = 0.0;  // 1 - optimality/feasibility
  std::vector<double> exact_mean;         // E[R_i] = floor_i + frac_i
  // Components ranked past the shortfall cut should stay at their floor;
  // these track how often randomized rounding disagrees.
  double wrong_up_probability = 0.0;  // P(some past-the-cut component rounds up)
  double expected_wrong_ups = 0.0;    // sum of past-the-cut fractional parts
};

ExactDistribution exact_distribution(const RoundingProblem& problem,
                                     const IntegerAllocation& optimal);

/// Empirical bias statistics of randomized rounding against the optimum.
struct BiasReport {
  std::vector<double> exact_mean;
  IntegerAllocation optimal;
  std::vector<int> bias_signs;  // sign(exact_mean[i] - optimal[i]) in {-1, 0, +1}
  std::vector<double> empirical_mean;
  double feasibility_rate = 0.0;
  double optimality_rate = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Runs `trials` independent randomized roundings; reproducible given
/// (trials, seed) regardless of execution order.
BiasReport monte_carlo_report(const RoundingProblem& problem, std::uint64_t trials,
                              std::uint64_t seed);

}  // namespace optround
