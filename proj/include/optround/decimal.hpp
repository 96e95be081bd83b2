#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "optround/types.hpp"

namespace optround {

/// Vector of non-negative decimals, each an exact integer multiple of
/// 10^-precision. Stored as scaled integers so grid membership is exact.
struct DecimalVector {
  std::vector<std::int64_t> scaled;  // value_i = scaled[i] * 10^-precision
  int precision = 0;                 // k

  std::vector<std::string> to_strings() const;  // exactly k fractional digits
  std::vector<double> to_doubles() const;
  std::int64_t scaled_sum() const;
};

/// Renders units * 10^-precision with exactly `precision` fractional digits.
std::string format_scaled_decimal(std::int64_t units, int precision);

inline constexpr int kMaxDecimalPrecision = 12;

/// Rounds every component to the 10^-k grid so that the sum moves by less
/// than 10^-k and the L^q error of the scaled problem is minimal. When the
/// scaled sum is not an integer both admissible targets are compared; ties go
/// to the target nearer the scaled sum, then to the lower one.
DecimalVector decimal_round(std::span<const double> values, int precision, double q,
                            double snap_tolerance = kDefaultSnapTolerance);

/// Exact-arithmetic variant for decimal string inputs ("12", "0.25", "3.");
/// no binary floating point touches the values, so grid membership and every
/// comparison are exact. Strings must be unsigned plain decimals without
/// exponents.
DecimalVector decimal_round(std::span<const std::string> decimals, int precision, double q);

}  // namespace optround
