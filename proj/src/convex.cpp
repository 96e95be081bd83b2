#include "optround/convex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optround/core.hpp"

namespace optround {

namespace {

struct SnappedRelaxed {
  std::vector<double> values;
  detail::Decomposed d;
};

SnappedRelaxed prepare(const SeparableObjective& objective, const RelaxedSolution& relaxed,
                       bool require_feasible_sum) {
  if (objective.size() != relaxed.values.size()) {
    fail(ErrorCode::LengthMismatch, "objective has " + std::to_string(objective.size()) +
                                        " components, relaxed solution has " +
                                        std::to_string(relaxed.values.size()));
  }
  SnappedRelaxed s;
  s.values = detail::snap_checked(relaxed.values, relaxed.snap_tolerance);
  if (require_feasible_sum) {
    const double sum = detail::neumaier_sum(s.values);
    const double window =
        relaxed.snap_tolerance * static_cast<double>(s.values.size());
    if (std::fabs(sum - static_cast<double>(relaxed.target)) > window) {
      fail(ErrorCode::InfeasibleTarget,
           "relaxed solution sums to " + std::to_string(sum) + ", target is " +
               std::to_string(relaxed.target));
    }
  }
  s.d = detail::decompose_arrays(s.values);
  return s;
}

std::vector<MarginalCost> costs_from(const SeparableObjective& objective,
                                     const detail::Decomposed& d) {
  std::vector<MarginalCost> costs;
  costs.reserve(d.fractional_count);
  for (std::size_t i = 0; i < d.fracs.size(); ++i) {
    if (d.fracs[i] == 0.0) continue;
    const double lo = objective.evaluate_component(i, d.floors[i]);
    const double hi = objective.evaluate_component(i, d.floors[i] + 1.0);
    costs.push_back({i, hi - lo});
  }
  return costs;
}

}  // namespace

SeparableObjective::SeparableObjective(std::vector<Component> components)
    : components_(std::move(components)) {
  if (components_.empty()) fail(ErrorCode::EmptyInput, "objective has no components");
  for (const auto& c : components_) {
    if (!c) fail(ErrorCode::InvalidArgument, "objective component is not callable");
  }
}

double SeparableObjective::evaluate_component(std::size_t i, double u) const {
  double value = 0.0;
  try {
    value = components_[i](u);
  } catch (const std::exception& e) {
    fail(ErrorCode::EvaluationFailure,
         "component " + std::to_string(i) + " threw: " + e.what());
  }
  if (!std::isfinite(value)) {
    fail(ErrorCode::EvaluationFailure,
         "component " + std::to_string(i) + " is not finite at " + std::to_string(u));
  }
  return value;
}

double SeparableObjective::evaluate(std::span<const std::int64_t> point) const {
  if (point.size() != components_.size()) {
    fail(ErrorCode::LengthMismatch, "evaluation point has wrong dimension");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < point.size(); ++i) {
    sum += evaluate_component(i, static_cast<double>(point[i]));
  }
  return sum;
}

std::vector<MarginalCost> marginal_costs(const SeparableObjective& objective,
                                         const RelaxedSolution& relaxed) {
  // Marginal costs are per-component; the sum constraint is irrelevant here.
  return costs_from(objective, prepare(objective, relaxed, false).d);
}

IntegerAllocation round_separable(const SeparableObjective& objective,
                                  const RelaxedSolution& relaxed) {
  const auto s = prepare(objective, relaxed, true);
  const std::int64_t up_count = relaxed.target - s.d.floor_sum;
  if (up_count < 0 || static_cast<std::uint64_t>(up_count) > s.d.fractional_count) {
    fail(ErrorCode::InfeasibleTarget, "target outside the floor/ceiling box");
  }
  auto costs = costs_from(objective, s.d);
  std::stable_sort(costs.begin(), costs.end(),
                   [](const MarginalCost& a, const MarginalCost& b) { return a.delta < b.delta; });
  std::vector<std::int64_t> out(s.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::int64_t>(s.d.floors[i]);
  for (std::int64_t k = 0; k < up_count; ++k) out[costs[static_cast<std::size_t>(k)].index] += 1;
  return IntegerAllocation(std::move(out), relaxed.target);
}

bool convexity_spot_check(const SeparableObjective& objective, const RelaxedSolution& relaxed) {
  const auto s = prepare(objective, relaxed, false);
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (s.d.fracs[i] == 0.0) continue;
    const double lo = objective.evaluate_component(i, s.d.floors[i]);
    const double hi = objective.evaluate_component(i, s.d.floors[i] + 1.0);
    const double mid = objective.evaluate_component(i, s.d.floors[i] + 0.5);
    if (!(mid < 0.5 * (lo + hi))) return false;
  }
  return true;
}

}  // namespace optround
