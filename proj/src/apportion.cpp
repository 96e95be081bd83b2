#include "optround/apportion.hpp"

#include <cmath>
#include <string>

#include "optround/core.hpp"

namespace optround {

namespace {
// Fixed snapping tolerance for quotas: exactly proportional vote vectors must
// yield integer quotas despite floating-point division noise.
constexpr double kQuotaSnapTolerance = 1e-9;
}  // namespace

ApportionmentResult apportion(const ApportionmentProblem& problem) {
  if (problem.votes.empty()) fail(ErrorCode::EmptyInput, "no parties");
  if (problem.seats < 1) fail(ErrorCode::InvalidArgument, "seat count must be at least 1");
  for (std::size_t i = 0; i < problem.votes.size(); ++i) {
    const double v = problem.votes[i];
    if (!std::isfinite(v) || !(v > 0.0)) {
      fail(ErrorCode::NonPositiveVotes,
           "party " + std::to_string(i) + " has non-positive votes");
    }
  }
  const double vote_sum = detail::neumaier_sum(problem.votes);
  std::vector<double> quotas(problem.votes.size());
  for (std::size_t i = 0; i < quotas.size(); ++i) {
    quotas[i] = static_cast<double>(problem.seats) * problem.votes[i] / vote_sum;
  }

  const auto snapped = detail::snap_checked(quotas, kQuotaSnapTolerance);
  const auto d = detail::decompose_arrays(snapped);
  IntegerAllocation seats = detail::select_up_roundings(d, problem.seats);

  ApportionmentResult result{.seats = std::move(seats),
                             .quotas = snapped,
                             .remainders = d.fracs};
  return result;
}

}  // namespace optround
