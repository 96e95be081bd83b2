#include "optround/methods.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <string>

#include "optround/core.hpp"
#include "optround/kernels.hpp"

namespace optround {

namespace {

constexpr std::size_t kMaxEnumerationComponents = 20;

}  // namespace

FractionalOutcome fractional_round(const RoundingProblem& problem, double threshold) {
  if (!(threshold >= 0.0) || !(threshold < 1.0)) {
    fail(ErrorCode::InvalidThreshold, "threshold must lie in [0, 1)");
  }
  const auto d = detail::decompose_arrays(problem.values());
  FractionalOutcome outcome;
  outcome.allocation.resize(problem.size());
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const bool down = d.fracs[i] <= threshold;
    outcome.below_count += down;
    outcome.allocation[i] = static_cast<std::int64_t>(d.floors[i]) + (down ? 0 : 1);
    sum += outcome.allocation[i];
  }
  outcome.sum_deviation = sum - problem.target();
  return outcome;
}

std::optional<double> feasible_threshold(const RoundingProblem& problem) {
  const auto d = detail::decompose_arrays(problem.values());
  const std::int64_t up_count = problem.target() - d.floor_sum;
  std::vector<double> sorted(d.fracs);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  const auto cut = static_cast<std::size_t>(up_count);
  if (cut == sorted.size()) return 0.0;  // every component rounds up
  if (up_count > 0 && sorted[cut - 1] == sorted[cut]) {
    return std::nullopt;  // tied fractional parts straddle the cut
  }
  return sorted[cut];
}

std::vector<std::int64_t> randomized_round(const RoundingProblem& problem, std::uint64_t seed,
                                           std::uint64_t trial) {
  const auto d = detail::decompose_arrays(problem.values());
  const std::uint64_t key = kernels::trial_key(seed, trial);
  std::vector<std::int64_t> out(problem.size());
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const bool up = kernels::uniform_draw(key, i) < d.fracs[i];
    out[i] = static_cast<std::int64_t>(d.floors[i]) + (up ? 1 : 0);
  }
  return out;
}

ExactDistribution exact_distribution(const RoundingProblem& problem,
                                     const IntegerAllocation& optimal) {
  if (optimal.size() != problem.size()) {
    fail(ErrorCode::LengthMismatch, "optimal allocation length does not match the problem");
  }
  const auto d = detail::decompose_arrays(problem.values());
  if (d.fractional_count > kMaxEnumerationComponents) {
    fail(ErrorCode::TooManyComponents,
         "exact enumeration supports at most " + std::to_string(kMaxEnumerationComponents) +
             " non-integer components, got " + std::to_string(d.fractional_count));
  }
  const std::int64_t up_count = problem.target() - d.floor_sum;

  ExactDistribution dist;
  dist.exact_mean.resize(problem.size());
  for (std::size_t i = 0; i < problem.size(); ++i) dist.exact_mean[i] = d.floors[i] + d.fracs[i];

  // Gather non-integer components and the optimal up pattern. An optimal
  // value outside the floor/ceiling box is unreachable; integer components
  // must match their floor exactly.
  std::vector<std::size_t> fractional;
  fractional.reserve(d.fractional_count);
  bool reachable = true;
  std::uint32_t optimal_mask = 0;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const auto floor_part = static_cast<std::int64_t>(d.floors[i]);
    const std::int64_t up = optimal[i] - floor_part;
    if (d.fracs[i] != 0.0) {
      if (up == 1) optimal_mask |= 1u << fractional.size();
      if (up != 0 && up != 1) reachable = false;
      fractional.push_back(i);
    } else if (up != 0) {
      reachable = false;
    }
  }

  const std::size_t k = fractional.size();
  double feasibility = 0.0;
  double optimality = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    double prob = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double p = d.fracs[fractional[j]];
      prob *= (mask >> j & 1) ? p : 1.0 - p;
    }
    if (std::popcount(mask) == up_count) feasibility += prob;
    if (reachable && mask == optimal_mask) optimality += prob;
  }
  dist.feasibility_probability = feasibility;
  dist.optimality_probability = optimality;
  dist.conditional_non_optimality =
      feasibility > 0.0 ? 1.0 - optimality / feasibility : 0.0;

  const auto by_priority = detail::fractional_by_priority(d);
  double stay_down = 1.0;
  double expected = 0.0;
  for (std::size_t rank = static_cast<std::size_t>(up_count); rank < by_priority.size(); ++rank) {
    const double p = d.fracs[by_priority[rank]];
    stay_down *= 1.0 - p;
    expected += p;
  }
  dist.wrong_up_probability = 1.0 - stay_down;
  dist.expected_wrong_ups = expected;
  return dist;
}

BiasReport monte_carlo_report(const RoundingProblem& problem, std::uint64_t trials,
                              std::uint64_t seed) {
  if (trials == 0) fail(ErrorCode::InvalidArgument, "at least one trial is required");
  const auto d = detail::decompose_arrays(problem.values());
  const std::size_t n = problem.size();

  IntegerAllocation optimal = oric_round(problem);
  std::vector<std::uint8_t> up_optimal(n);
  for (std::size_t i = 0; i < n; ++i) {
    up_optimal[i] =
        static_cast<std::uint8_t>(optimal[i] - static_cast<std::int64_t>(d.floors[i]));
  }

  std::vector<std::uint64_t> up_counts(n, 0);
  std::uint64_t feasible = 0;
  std::uint64_t optimal_hits = 0;
  kernels::active().bernoulli_trials(d.fracs.data(), up_optimal.data(), n, seed, 0, trials,
                                     problem.target() - d.floor_sum, up_counts.data(), &feasible,
                                     &optimal_hits);

  BiasReport report{.exact_mean = std::vector<double>(n),
                    .optimal = std::move(optimal),
                    .bias_signs = std::vector<int>(n),
                    .empirical_mean = std::vector<double>(n),
                    .feasibility_rate = static_cast<double>(feasible) / static_cast<double>(trials),
                    .optimality_rate =
                        static_cast<double>(optimal_hits) / static_cast<double>(trials),
                    .trials = trials,
                    .seed = seed};
  for (std::size_t i = 0; i < n; ++i) {
    report.exact_mean[i] = d.floors[i] + d.fracs[i];
    report.empirical_mean[i] =
        d.floors[i] + static_cast<double>(up_counts[i]) / static_cast<double>(trials);
    // sign(exact_mean - optimal) without FP subtraction: frac == 0 is exact,
    // up-rounded components sit above their mean, floored ones below.
    if (d.fracs[i] == 0.0) {
      report.bias_signs[i] = 0;
    } else {
      report.bias_signs[i] = up_optimal[i] ? -1 : +1;
    }
  }
  return report;
}

}  // namespace optround
