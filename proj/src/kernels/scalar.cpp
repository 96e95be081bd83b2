#include <cmath>
#include <cstddef>
#include <cstdint>

#include "optround/kernels.hpp"

namespace optround::kernels {

namespace {

void snap_integers_scalar(const double* in, std::size_t n, double tol, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double v = in[i];
    const double nearest = std::nearbyint(v);
    // "+ 0.0" turns -0.0 (from negatives within tolerance) into +0.0.
    out[i] = (std::fabs(v - nearest) <= tol) ? nearest + 0.0 : v;
  }
}

DecomposeSums split_floor_frac_scalar(const double* values, std::size_t n, double* floors,
                                      double* fracs) {
  DecomposeSums sums;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = std::floor(values[i]);
    const double r = values[i] - f;  // exact: f and v share a binade or f == 0
    floors[i] = f;
    fracs[i] = r;
    sums.floor_sum += f;
    sums.fractional_count += (r != 0.0);
  }
  return sums;
}

double abs_err_pow_sum_scalar(const double* x, const double* m, std::size_t n, double q) {
  double sum = 0.0;
  if (q == 1.0) {
    for (std::size_t i = 0; i < n; ++i) sum += std::fabs(x[i] - m[i]);
  } else if (q == 2.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d = x[i] - m[i];
      sum += d * d;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) sum += std::pow(std::fabs(x[i] - m[i]), q);
  }
  return sum;
}

double rel_err_pow_sum_scalar(const double* x, const double* m, std::size_t n, double q) {
  double sum = 0.0;
  if (q == 1.0) {
    for (std::size_t i = 0; i < n; ++i) sum += std::fabs(x[i] - m[i]) / x[i];
  } else if (q == 2.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r = (x[i] - m[i]) / x[i];
      sum += r * r;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) sum += std::pow(std::fabs(x[i] - m[i]) / x[i], q);
  }
  return sum;
}

void bernoulli_trials_scalar(const double* fracs, const std::uint8_t* up_optimal, std::size_t n,
                             std::uint64_t seed, std::uint64_t trial_begin,
                             std::uint64_t trial_end, std::int64_t shortfall,
                             std::uint64_t* up_counts, std::uint64_t* feasible,
                             std::uint64_t* optimal_hits) {
  for (std::uint64_t t = trial_begin; t < trial_end; ++t) {
    const std::uint64_t key = trial_key(seed, t);
    std::int64_t ups = 0;
    bool match = true;
    for (std::size_t i = 0; i < n; ++i) {
      const bool up = uniform_draw(key, i) < fracs[i];
      up_counts[i] += up;
      ups += up;
      match &= (up == (up_optimal[i] != 0));
    }
    *feasible += (ups == shortfall);
    *optimal_hits += match;
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{
      snap_integers_scalar, split_floor_frac_scalar, abs_err_pow_sum_scalar,
      rel_err_pow_sum_scalar, bernoulli_trials_scalar,
  };
  return t;
}

}  // namespace optround::kernels
