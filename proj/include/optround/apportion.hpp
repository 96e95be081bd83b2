#pragma once

#include <cstdint>
#include <vector>

#include "optround/types.hpp"

namespace optround {

/// Largest-remainder seat allocation: votes in, a fixed number of seats out.
struct ApportionmentProblem {
  std::vector<double> votes;  // all strictly positive
  std::int64_t seats = 1;     // M >= 1
};

struct ApportionmentResult {
  IntegerAllocation seats;
  std::vector<double> quotas;      // M * v_i / sum(v), snapped
  std::vector<double> remainders;  // fractional parts of the quotas
};

/// Computes proportional quotas, snaps floating-point dust, then distributes
/// the leftover seats by descending remainder (larger integer parts win
/// ties). Every party receives floor(quota) or ceil(quota) and the total is
/// exactly M.
ApportionmentResult apportion(const ApportionmentProblem& problem);

}  // namespace optround
