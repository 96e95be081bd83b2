#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "optround/types.hpp"

namespace optround {

/// Snaps near-integer entries, derives the integer target from the snapped
/// sum and validates the input. Equivalent to the RoundingProblem constructor.
RoundingProblem snap_and_validate(std::span<const double> raw_values,
                                  double snap_tolerance = kDefaultSnapTolerance);

/// Floor/fractional split of every component, in input order.
ComponentDecomposition decompose(const RoundingProblem& problem);

/// I = target - sum(floors): the exact number of components to round up.
/// Throws InfeasibleTarget when I < 0 or I exceeds the non-integer count.
std::int64_t shortfall(const ComponentDecomposition& decomposition, std::int64_t target);

/// Index permutation sorted by (fractional part desc, floor desc, index asc).
/// The third key is a determinism tie-break.
std::vector<std::size_t> oric_order(const ComponentDecomposition& decomposition);

/// Sum-preserving rounding: keeps every component at its floor except the I
/// components ranked first by oric_order, which are rounded up. The result
/// minimizes the L^q rounding error for every q >= 1 simultaneously and,
/// among those minimizers, the relative-error sum (when all inputs are
/// positive).
IntegerAllocation oric_round(const RoundingProblem& problem);

/// Symmetric formulation: start at ceilings and round down the components
/// ranked last. Produces the same allocation as oric_round on every input.
IntegerAllocation oric_round_ceiling_init(const RoundingProblem& problem);

/// Rounds toward an explicit target, which need not equal the snapped sum.
/// The target must lie between the floor and ceiling sums.
IntegerAllocation round_to_target(std::span<const double> values, std::int64_t target,
                                  double snap_tolerance = kDefaultSnapTolerance);

/// (sum_i |x_i - m_i|^q)^(1/q) for q >= 1.
double lq_error(std::span<const double> x, std::span<const std::int64_t> m, double q);
double lq_error(std::span<const double> x, const IntegerAllocation& m, double q);

/// sum_i |x_i - m_i|^q / x_i^q; requires every x_i > 0.
double relative_error_sum(std::span<const double> x, std::span<const std::int64_t> m, double q);
double relative_error_sum(std::span<const double> x, const IntegerAllocation& m, double q);

/// prod_i |x_i - m_i|^q / x_i^q; requires every x_i > 0.
double relative_error_product(std::span<const double> x, std::span<const std::int64_t> m,
                              double q);
double relative_error_product(std::span<const double> x, const IntegerAllocation& m, double q);

/// All error functionals in one pass; relative metrics are empty when some
/// x_i == 0.
ErrorReport error_report(std::span<const double> x, const IntegerAllocation& m, double q);

namespace detail {

// Flat decomposition used on hot paths; the public ComponentDecomposition
// wraps the same arrays.
struct Decomposed {
  std::vector<double> floors;
  std::vector<double> fracs;
  std::int64_t floor_sum = 0;
  std::size_t fractional_count = 0;
};

Decomposed decompose_arrays(std::span<const double> snapped_values);

// Snap + validation shared by the entry points that accept raw values.
std::vector<double> snap_checked(std::span<const double> raw_values, double snap_tolerance);

struct SortComponent {
  double frac;
  std::int64_t floor_part;
  std::uint32_t index;
};

inline bool oric_before(const SortComponent& a, const SortComponent& b) {
  if (a.frac != b.frac) return a.frac > b.frac;
  if (a.floor_part != b.floor_part) return a.floor_part > b.floor_part;
  return a.index < b.index;
}

IntegerAllocation select_up_roundings(const Decomposed& d, std::int64_t target);

// A tie group straddling the up-rounding cut is the one place the sort order
// leaves a real choice. Every member keeps the L^q error unchanged, but the
// relative-error delta of an up-rounding is ((1-f)^q - f^q) / x_i^q, whose
// numerator flips sign at f = 1/2: for f < 1/2 the sum is minimized by
// up-rounding the largest integer parts, for f > 1/2 by the smallest. The
// base order already handles the former; this re-orders the straddling group
// for the latter.
void adjust_straddling_tie(std::vector<SortComponent>& order, std::int64_t up_count);

// Indices of the non-integer components, sorted by up-rounding priority.
std::vector<std::size_t> fractional_by_priority(const Decomposed& d);

double neumaier_sum(std::span<const double> values);

}  // namespace detail

}  // namespace optround
