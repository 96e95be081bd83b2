#include "optround/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optround/kernels.hpp"

namespace optround {

namespace detail {

double neumaier_sum(std::span<const double> values) {
  double sum = 0.0;
  double comp = 0.0;
  for (const double v : values) {
    const double t = sum + v;
    comp += (std::fabs(sum) >= std::fabs(v)) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

std::vector<double> snap_checked(std::span<const double> raw_values, double snap_tolerance) {
  if (raw_values.empty()) fail(ErrorCode::EmptyInput, "input vector is empty");
  if (!(snap_tolerance >= 0.0) || snap_tolerance >= 0.5) {
    fail(ErrorCode::InvalidArgument, "snap tolerance must lie in [0, 0.5)");
  }
  for (std::size_t i = 0; i < raw_values.size(); ++i) {
    const double v = raw_values[i];
    if (!std::isfinite(v)) {
      fail(ErrorCode::InvalidArgument, "entry " + std::to_string(i) + " is not finite");
    }
    if (v < -snap_tolerance) {
      fail(ErrorCode::NegativeEntry,
           "entry " + std::to_string(i) + " = " + std::to_string(v) + " is negative");
    }
  }
  std::vector<double> snapped(raw_values.size());
  kernels::snap_integers(raw_values, snap_tolerance, snapped);
  const double sum = neumaier_sum(snapped);
  if (!(sum < kMaxExactSum)) {
    fail(ErrorCode::PrecisionOverflow, "vector sum exceeds the exact integer range of double");
  }
  return snapped;
}

Decomposed decompose_arrays(std::span<const double> snapped_values) {
  Decomposed d;
  d.floors.resize(snapped_values.size());
  d.fracs.resize(snapped_values.size());
  const auto sums = kernels::split_floor_frac(snapped_values, d.floors, d.fracs);
  d.floor_sum = static_cast<std::int64_t>(sums.floor_sum);
  d.fractional_count = sums.fractional_count;
  return d;
}

void adjust_straddling_tie(std::vector<SortComponent>& order, std::int64_t up_count) {
  const auto cut = static_cast<std::size_t>(up_count);
  if (cut == 0 || cut >= order.size()) return;
  const double frac = order[cut - 1].frac;
  if (!(frac > 0.5) || order[cut].frac != frac) return;
  std::size_t lo = cut - 1;
  while (lo > 0 && order[lo - 1].frac == frac) --lo;
  std::size_t hi = cut + 1;
  while (hi < order.size() && order[hi].frac == frac) ++hi;
  std::sort(order.begin() + static_cast<std::ptrdiff_t>(lo),
            order.begin() + static_cast<std::ptrdiff_t>(hi),
            [](const SortComponent& a, const SortComponent& b) {
              if (a.floor_part != b.floor_part) return a.floor_part < b.floor_part;
              return a.index < b.index;
            });
}

IntegerAllocation select_up_roundings(const Decomposed& d, std::int64_t target) {
  const std::int64_t up_count = target - d.floor_sum;
  if (up_count < 0 || static_cast<std::uint64_t>(up_count) > d.fractional_count) {
    fail(ErrorCode::InfeasibleTarget,
         "target " + std::to_string(target) + " outside [" + std::to_string(d.floor_sum) + ", " +
             std::to_string(d.floor_sum + static_cast<std::int64_t>(d.fractional_count)) + "]");
  }
  const std::size_t n = d.floors.size();
  std::vector<std::int64_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::int64_t>(d.floors[i]);
  if (up_count > 0) {
    std::vector<SortComponent> order(n);
    for (std::size_t i = 0; i < n; ++i) {
      order[i] = {d.fracs[i], out[i], static_cast<std::uint32_t>(i)};
    }
    std::sort(order.begin(), order.end(), oric_before);
    adjust_straddling_tie(order, up_count);
    for (std::int64_t k = 0; k < up_count; ++k) out[order[static_cast<std::size_t>(k)].index] += 1;
  }
  return IntegerAllocation(std::move(out), target);
}

std::vector<std::size_t> fractional_by_priority(const Decomposed& d) {
  std::vector<SortComponent> order;
  order.reserve(d.fractional_count);
  for (std::size_t i = 0; i < d.fracs.size(); ++i) {
    if (d.fracs[i] != 0.0) {
      order.push_back({d.fracs[i], static_cast<std::int64_t>(d.floors[i]),
                       static_cast<std::uint32_t>(i)});
    }
  }
  std::sort(order.begin(), order.end(), oric_before);
  std::vector<std::size_t> indices(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) indices[i] = order[i].index;
  return indices;
}

}  // namespace detail

RoundingProblem::RoundingProblem(std::span<const double> raw_values, double snap_tolerance)
    : snap_tolerance_(snap_tolerance) {
  values_ = detail::snap_checked(raw_values, snap_tolerance);
  const double sum = detail::neumaier_sum(values_);
  const double nearest = std::nearbyint(sum);
  const double window = snap_tolerance * static_cast<double>(values_.size());
  if (std::fabs(sum - nearest) > window) {
    fail(ErrorCode::SumNotInteger, "sum " + std::to_string(sum) +
                                       " is farther than N*tolerance from any integer");
  }
  target_ = static_cast<std::int64_t>(nearest);
}

IntegerAllocation::IntegerAllocation(std::vector<std::int64_t> values, std::int64_t target)
    : values_(std::move(values)), target_(target) {
  std::int64_t sum = 0;
  for (const std::int64_t v : values_) {
    if (v < 0) fail(ErrorCode::InvalidArgument, "allocation entries must be non-negative");
    if (__builtin_add_overflow(sum, v, &sum)) {
      fail(ErrorCode::PrecisionOverflow, "allocation sum overflows");
    }
  }
  if (sum != target_) {
    fail(ErrorCode::InvalidArgument, "allocation sums to " + std::to_string(sum) +
                                         ", expected " + std::to_string(target_));
  }
}

RoundingProblem snap_and_validate(std::span<const double> raw_values, double snap_tolerance) {
  return RoundingProblem(raw_values, snap_tolerance);
}

ComponentDecomposition decompose(const RoundingProblem& problem) {
  const auto d = detail::decompose_arrays(problem.values());
  ComponentDecomposition result;
  result.entries.resize(problem.size());
  for (std::size_t i = 0; i < problem.size(); ++i) {
    result.entries[i] = {i, static_cast<std::int64_t>(d.floors[i]), d.fracs[i]};
  }
  return result;
}

std::int64_t shortfall(const ComponentDecomposition& decomposition, std::int64_t target) {
  std::int64_t floor_sum = 0;
  std::int64_t fractional = 0;
  for (const auto& e : decomposition.entries) {
    floor_sum += e.floor_part;
    fractional += (e.frac_part != 0.0);
  }
  const std::int64_t result = target - floor_sum;
  if (result < 0 || result > fractional) {
    fail(ErrorCode::InfeasibleTarget,
         "shortfall " + std::to_string(result) + " outside [0, " + std::to_string(fractional) +
             "]");
  }
  return result;
}

std::vector<std::size_t> oric_order(const ComponentDecomposition& decomposition) {
  std::vector<detail::SortComponent> order(decomposition.entries.size());
  for (std::size_t i = 0; i < decomposition.entries.size(); ++i) {
    const auto& e = decomposition.entries[i];
    order[i] = {e.frac_part, e.floor_part, static_cast<std::uint32_t>(i)};
  }
  std::sort(order.begin(), order.end(), detail::oric_before);
  std::vector<std::size_t> indices(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) indices[i] = order[i].index;
  return indices;
}

IntegerAllocation oric_round(const RoundingProblem& problem) {
  const auto d = detail::decompose_arrays(problem.values());
  return detail::select_up_roundings(d, problem.target());
}

IntegerAllocation oric_round_ceiling_init(const RoundingProblem& problem) {
  const auto d = detail::decompose_arrays(problem.values());
  const std::int64_t up_count = problem.target() - d.floor_sum;
  if (up_count < 0 || static_cast<std::uint64_t>(up_count) > d.fractional_count) {
    fail(ErrorCode::InfeasibleTarget, "target outside the floor/ceiling box");
  }
  const std::size_t n = problem.size();
  std::vector<std::int64_t> out(n);
  std::vector<detail::SortComponent> fractional;
  fractional.reserve(d.fractional_count);
  for (std::size_t i = 0; i < n; ++i) {
    const auto floor_part = static_cast<std::int64_t>(d.floors[i]);
    if (d.fracs[i] != 0.0) {
      out[i] = floor_part + 1;  // ceiling
      fractional.push_back({d.fracs[i], floor_part, static_cast<std::uint32_t>(i)});
    } else {
      out[i] = floor_part;
    }
  }
  // Round down the components ranked last in the up-rounding order; sorting
  // by the exact reverse key keeps ties consistent with oric_round.
  std::sort(fractional.begin(), fractional.end(),
            [](const detail::SortComponent& a, const detail::SortComponent& b) {
              return detail::oric_before(b, a);
            });
  const std::int64_t down_count =
      static_cast<std::int64_t>(d.fractional_count) - up_count;
  // Mirror of adjust_straddling_tie: when a tie group with fractional part
  // above 1/2 straddles the down-rounding cut, the larger integer parts are
  // the ones to round down.
  const auto cut = static_cast<std::size_t>(down_count);
  if (cut > 0 && cut < fractional.size() && fractional[cut - 1].frac > 0.5 &&
      fractional[cut].frac == fractional[cut - 1].frac) {
    const double frac = fractional[cut - 1].frac;
    std::size_t lo = cut - 1;
    while (lo > 0 && fractional[lo - 1].frac == frac) --lo;
    std::size_t hi = cut + 1;
    while (hi < fractional.size() && fractional[hi].frac == frac) ++hi;
    std::sort(fractional.begin() + static_cast<std::ptrdiff_t>(lo),
              fractional.begin() + static_cast<std::ptrdiff_t>(hi),
              [](const detail::SortComponent& a, const detail::SortComponent& b) {
                if (a.floor_part != b.floor_part) return a.floor_part > b.floor_part;
                return a.index > b.index;
              });
  }
  for (std::int64_t k = 0; k < down_count; ++k) {
    out[fractional[static_cast<std::size_t>(k)].index] -= 1;
  }
  return IntegerAllocation(std::move(out), problem.target());
}

IntegerAllocation round_to_target(std::span<const double> values, std::int64_t target,
                                  double snap_tolerance) {
  const auto snapped = detail::snap_checked(values, snap_tolerance);
  const auto d = detail::decompose_arrays(snapped);
  return detail::select_up_roundings(d, target);
}

namespace {

void check_error_args(std::size_t nx, std::size_t nm, double q) {
  if (nx != nm) {
    fail(ErrorCode::LengthMismatch, "value vector has " + std::to_string(nx) +
                                        " entries, allocation has " + std::to_string(nm));
  }
  if (!(q >= 1.0) || !std::isfinite(q)) {
    fail(ErrorCode::InvalidExponent, "norm exponent must be a finite real >= 1");
  }
}

std::vector<double> to_doubles(std::span<const std::int64_t> m) {
  return std::vector<double>(m.begin(), m.end());
}

void check_positive(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) {
      fail(ErrorCode::ZeroComponent,
           "relative error undefined: entry " + std::to_string(i) + " is not positive");
    }
  }
}

}  // namespace

double lq_error(std::span<const double> x, std::span<const std::int64_t> m, double q) {
  check_error_args(x.size(), m.size(), q);
  const auto md = to_doubles(m);
  const double sum = kernels::abs_err_pow_sum(x, md, q);
  if (q == 1.0) return sum;
  if (q == 2.0) return std::sqrt(sum);
  return std::pow(sum, 1.0 / q);
}

double lq_error(std::span<const double> x, const IntegerAllocation& m, double q) {
  return lq_error(x, m.values(), q);
}

double relative_error_sum(std::span<const double> x, std::span<const std::int64_t> m, double q) {
  check_error_args(x.size(), m.size(), q);
  check_positive(x);
  return kernels::rel_err_pow_sum(x, to_doubles(m), q);
}

double relative_error_sum(std::span<const double> x, const IntegerAllocation& m, double q) {
  return relative_error_sum(x, m.values(), q);
}

double relative_error_product(std::span<const double> x, std::span<const std::int64_t> m,
                              double q) {
  check_error_args(x.size(), m.size(), q);
  check_positive(x);
  double product = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ratio = std::fabs(x[i] - static_cast<double>(m[i])) / x[i];
    product *= (q == 1.0) ? ratio : std::pow(ratio, q);
    if (product == 0.0) break;
  }
  return product;
}

double relative_error_product(std::span<const double> x, const IntegerAllocation& m, double q) {
  return relative_error_product(x, m.values(), q);
}

ErrorReport error_report(std::span<const double> x, const IntegerAllocation& m, double q) {
  ErrorReport report;
  report.q = q;
  report.lq_error = lq_error(x, m.values(), q);
  const bool all_positive = std::all_of(x.begin(), x.end(), [](double v) { return v > 0.0; });
  if (all_positive) {
    report.relative_sum = relative_error_sum(x, m.values(), q);
    report.relative_product = relative_error_product(x, m.values(), q);
  }
  return report;
}

}  // namespace optround
