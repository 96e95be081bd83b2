#include "optround/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "optround/core.hpp"

namespace optround {

namespace {

constexpr double kTieRelTolerance = 1e-12;

struct Box {
  std::vector<double> snapped;
  std::vector<std::int64_t> floors;
  std::vector<std::size_t> fractional;  // indices with a non-zero fractional part
  std::int64_t floor_sum = 0;
  std::int64_t up_count = 0;
};

Box make_box(std::span<const double> values, std::int64_t target, double snap_tolerance,
             std::size_t max_components) {
  Box box;
  box.snapped = detail::snap_checked(values, snap_tolerance);
  box.floors.resize(box.snapped.size());
  for (std::size_t i = 0; i < box.snapped.size(); ++i) {
    const double f = std::floor(box.snapped[i]);
    box.floors[i] = static_cast<std::int64_t>(f);
    box.floor_sum += box.floors[i];
    if (box.snapped[i] != f) box.fractional.push_back(i);
  }
  if (box.fractional.size() > max_components) {
    fail(ErrorCode::TooManyComponents,
         "enumeration supports at most " + std::to_string(max_components) +
             " non-integer components, got " + std::to_string(box.fractional.size()));
  }
  box.up_count = target - box.floor_sum;
  if (box.up_count < 0 || static_cast<std::size_t>(box.up_count) > box.fractional.size()) {
    fail(ErrorCode::InfeasibleTarget, "target outside the floor/ceiling box");
  }
  return box;
}

// Visits every I-subset of the fractional components in lexicographic order.
void visit_box(const Box& box, const std::function<void(std::span<const std::int64_t>)>& visit) {
  std::vector<std::int64_t> alloc(box.floors);
  const std::size_t k = box.fractional.size();
  const auto want = static_cast<std::size_t>(box.up_count);
  std::vector<std::size_t> choose(want);
  for (std::size_t i = 0; i < want; ++i) choose[i] = i;
  while (true) {
    for (const std::size_t pos : choose) alloc[box.fractional[pos]] += 1;
    visit(alloc);
    for (const std::size_t pos : choose) alloc[box.fractional[pos]] -= 1;
    // advance to the next combination
    std::size_t i = want;
    while (i > 0) {
      --i;
      if (choose[i] != i + k - want) {
        ++choose[i];
        for (std::size_t j = i + 1; j < want; ++j) choose[j] = choose[j - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
    if (want == 0) return;
  }
}

double pow_sum(std::span<const double> x, std::span<const std::int64_t> m, double q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = std::fabs(x[i] - static_cast<double>(m[i]));
    if (q == 1.0) {
      sum += d;
    } else if (q == 2.0) {
      sum += d * d;
    } else if (q == 3.0) {
      sum += d * d * d;
    } else {
      sum += std::pow(d, q);
    }
  }
  return sum;
}

double relative_pow_sum(std::span<const double> x, std::span<const std::int64_t> m, double q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::fabs(x[i] - static_cast<double>(m[i])) / x[i];
    sum += (q == 1.0) ? r : std::pow(r, q);
  }
  return sum;
}

bool within_tie(double value, double best) {
  return value <= best + kTieRelTolerance * std::max(1.0, std::fabs(best));
}

OracleResult collect_optima(const Box& box, std::int64_t target,
                            const std::function<double(std::span<const std::int64_t>)>& cost) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t evaluated = 0;
  visit_box(box, [&](std::span<const std::int64_t> alloc) {
    ++evaluated;
    best = std::min(best, cost(alloc));
  });
  OracleResult result;
  result.evaluated = evaluated;
  result.min_value = best;
  visit_box(box, [&](std::span<const std::int64_t> alloc) {
    if (within_tie(cost(alloc), best)) {
      result.argmins.emplace_back(std::vector<std::int64_t>(alloc.begin(), alloc.end()), target);
    }
  });
  return result;
}

}  // namespace

void for_each_feasible(std::span<const double> values, std::int64_t target, double snap_tolerance,
                       const std::function<void(std::span<const std::int64_t>)>& visit) {
  visit_box(make_box(values, target, snap_tolerance, kOracleMaxComponents), visit);
}

std::vector<std::vector<std::int64_t>> enumerate_feasible(std::span<const double> values,
                                                          std::int64_t target,
                                                          double snap_tolerance) {
  std::vector<std::vector<std::int64_t>> out;
  for_each_feasible(values, target, snap_tolerance,
                    [&](std::span<const std::int64_t> alloc) {
                      out.emplace_back(alloc.begin(), alloc.end());
                    });
  return out;
}

OracleResult brute_force_optima(std::span<const double> values, std::int64_t target, double q,
                                double snap_tolerance) {
  if (!(q >= 1.0) || !std::isfinite(q)) {
    fail(ErrorCode::InvalidExponent, "norm exponent must be a finite real >= 1");
  }
  const Box box = make_box(values, target, snap_tolerance, kOracleMaxComponents);
  auto result = collect_optima(box, target, [&](std::span<const std::int64_t> alloc) {
    return pow_sum(box.snapped, alloc, q);
  });
  // Report the minimum as the L^q norm rather than its q-th power.
  result.min_value = (q == 1.0) ? result.min_value : std::pow(result.min_value, 1.0 / q);
  return result;
}

IntegerAllocation brute_force_best_relative(std::span<const double> values, std::int64_t target,
                                            double q, double snap_tolerance) {
  const Box box = make_box(values, target, snap_tolerance, kOracleMaxComponents);
  for (std::size_t i = 0; i < box.snapped.size(); ++i) {
    if (!(box.snapped[i] > 0.0)) {
      fail(ErrorCode::ZeroComponent, "relative comparison requires positive values");
    }
  }
  if (!(q >= 1.0) || !std::isfinite(q)) {
    fail(ErrorCode::InvalidExponent, "norm exponent must be a finite real >= 1");
  }
  const OracleResult optima = collect_optima(box, target, [&](std::span<const std::int64_t> a) {
    return pow_sum(box.snapped, a, q);
  });

  // Up-rounding priority rank of every component (fractional part desc,
  // floor desc, index asc), for resolving exact relative-error ties the same
  // way the production algorithm does.
  std::vector<std::size_t> rank(box.snapped.size(), 0);
  {
    std::vector<detail::SortComponent> order(box.snapped.size());
    for (std::size_t i = 0; i < box.snapped.size(); ++i) {
      order[i] = {box.snapped[i] - static_cast<double>(box.floors[i]), box.floors[i],
                  static_cast<std::uint32_t>(i)};
    }
    std::sort(order.begin(), order.end(), detail::oric_before);
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r].index] = r;
  }
  const auto up_signature = [&](const IntegerAllocation& alloc) {
    std::vector<std::size_t> sig;
    for (std::size_t i = 0; i < alloc.size(); ++i) {
      if (alloc[i] > box.floors[i]) sig.push_back(rank[i]);
    }
    std::sort(sig.begin(), sig.end());
    return sig;
  };

  const IntegerAllocation* best = nullptr;
  double best_rel = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_sig;
  for (const auto& candidate : optima.argmins) {
    const double rel = relative_pow_sum(box.snapped, candidate.values(), q);
    if (best == nullptr || rel < best_rel - kTieRelTolerance * std::max(1.0, best_rel)) {
      best = &candidate;
      best_rel = rel;
      best_sig = up_signature(candidate);
    } else if (within_tie(rel, best_rel)) {
      auto sig = up_signature(candidate);
      if (sig < best_sig) {
        best = &candidate;
        best_rel = std::min(best_rel, rel);
        best_sig = std::move(sig);
      }
    }
  }
  return *best;
}

OracleResult brute_force_separable(const SeparableObjective& objective,
                                   const RelaxedSolution& relaxed) {
  if (objective.size() != relaxed.values.size()) {
    fail(ErrorCode::LengthMismatch, "objective and relaxed solution sizes differ");
  }
  const Box box = make_box(relaxed.values, relaxed.target, relaxed.snap_tolerance,
                           kOracleMaxSeparableComponents);
  const double sum = detail::neumaier_sum(box.snapped);
  const double window = relaxed.snap_tolerance * static_cast<double>(box.snapped.size());
  if (std::fabs(sum - static_cast<double>(relaxed.target)) > window) {
    fail(ErrorCode::InfeasibleTarget, "relaxed solution sum does not match the target");
  }
  return collect_optima(box, relaxed.target, [&](std::span<const std::int64_t> alloc) {
    return objective.evaluate(alloc);
  });
}

}  // namespace optround
