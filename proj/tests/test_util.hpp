#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "optround/core.hpp"

namespace testutil {

inline optround::RoundingProblem problem(const std::vector<double>& values,
                                         double tol = optround::kDefaultSnapTolerance) {
  return optround::RoundingProblem(values, tol);
}

inline std::vector<std::int64_t> vec(const optround::IntegerAllocation& a) {
  return {a.values().begin(), a.values().end()};
}

// Random values in [0, max_value] with the last component lifted so the sum
// is an integer (within floating-point dust, which snapping absorbs).
inline std::vector<double> random_integer_sum_instance(std::mt19937_64& rng, std::size_t n_min,
                                                       std::size_t n_max,
                                                       double max_value = 10.0) {
  std::uniform_int_distribution<std::size_t> size_dist(n_min, n_max);
  std::uniform_real_distribution<double> value_dist(0.0, max_value);
  const std::size_t n = size_dist(rng);
  std::vector<double> values(n);
  for (auto& v : values) v = value_dist(rng);
  double sum = 0.0;
  for (const double v : values) sum += v;
  values.back() += std::ceil(sum) - sum;
  return values;
}

// Strictly fractional components (every fractional part in (0,1)) whose
// fractional parts sum to an integer >= 1.
inline std::vector<double> random_strict_fractional_instance(std::mt19937_64& rng,
                                                             std::size_t n_min = 3,
                                                             std::size_t n_max = 8,
                                                             std::int64_t max_floor = 5) {
  while (true) {
    std::uniform_int_distribution<std::size_t> size_dist(n_min, n_max);
    std::uniform_real_distribution<double> frac_dist(0.02, 0.98);
    std::uniform_int_distribution<std::int64_t> floor_dist(0, max_floor);
    const std::size_t n = size_dist(rng);
    std::vector<double> fracs(n);
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      fracs[i] = frac_dist(rng);
      partial += fracs[i];
    }
    const double last = std::ceil(partial) - partial;
    if (!(last > 0.02 && last < 0.98)) continue;  // keep strictly fractional
    fracs[n - 1] = last;
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = static_cast<double>(floor_dist(rng)) + fracs[i];
    }
    return values;
  }
}

// Positive values with at least one duplicated fractional part and integer
// sum. Fractional parts live on the dyadic grid g/64, so floor + frac is
// exactly representable and duplicated fractional parts tie exactly in
// double arithmetic (a decimal grid would not: frac(2.4) != frac(0.4)).
inline std::vector<double> random_duplicated_frac_instance(std::mt19937_64& rng,
                                                           std::size_t n_min = 3,
                                                           std::size_t n_max = 8) {
  std::uniform_int_distribution<std::size_t> size_dist(n_min, n_max);
  std::uniform_int_distribution<int> grid_dist(1, 63);  // frac = g / 64
  std::uniform_int_distribution<std::int64_t> floor_dist(0, 6);
  const std::size_t n = size_dist(rng);
  std::vector<int> grid(n);
  for (std::size_t i = 0; i + 1 < n; ++i) grid[i] = grid_dist(rng);
  grid[n - 1] = grid[0];  // forced duplicate
  int total = 0;
  for (std::size_t i = 0; i < n; ++i) total += grid[i];
  const int missing = (64 - total % 64) % 64;
  std::vector<double> values;
  values.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    values.push_back(static_cast<double>(floor_dist(rng)) + grid[i] / 64.0);
  }
  if (missing != 0) values.push_back(1.0 + missing / 64.0);
  return values;
}

inline std::int64_t sum_of(std::span<const std::int64_t> values) {
  std::int64_t sum = 0;
  for (const auto v : values) sum += v;
  return sum;
}

// Runs fn and reports the ErrorCode it throws (nullopt if it doesn't throw).
template <typename Fn>
std::optional<optround::ErrorCode> thrown_code(Fn&& fn) {
  try {
    fn();
  } catch (const optround::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace testutil
