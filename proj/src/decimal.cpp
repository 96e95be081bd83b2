#include "optround/decimal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optround/core.hpp"

namespace optround {

namespace {

constexpr std::int64_t kPow10[] = {
    1LL,
    10LL,
    100LL,
    1000LL,
    10000LL,
    100000LL,
    1000000LL,
    10000000LL,
    100000000LL,
    1000000000LL,
    10000000000LL,
    100000000000LL,
    1000000000000LL,
    10000000000000LL,
    100000000000000LL,
    1000000000000000LL,
    10000000000000000LL,
    100000000000000000LL,
    1000000000000000000LL,
};
constexpr int kMaxScaledDigits = 18;

void check_precision(int precision) {
  if (precision < 0 || precision > kMaxDecimalPrecision) {
    fail(ErrorCode::PrecisionOverflow,
         "precision must lie in [0, " + std::to_string(kMaxDecimalPrecision) + "], got " +
             std::to_string(precision));
  }
}

void check_exponent(double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) {
    fail(ErrorCode::InvalidExponent, "norm exponent must be a finite real >= 1");
  }
}

// value * 10^frac_digits held exactly in an int64.
struct ParsedDecimal {
  std::int64_t units = 0;
  int frac_digits = 0;
};

ParsedDecimal parse_decimal(const std::string& text, std::size_t index) {
  const auto bad = [&](const std::string& why) {
    fail(ErrorCode::ParseError, "entry " + std::to_string(index) + " ('" + text + "'): " + why);
  };
  if (text.empty()) bad("empty");
  ParsedDecimal parsed;
  bool seen_digit = false;
  bool seen_dot = false;
  for (const char c : text) {
    if (c == '.') {
      if (seen_dot) bad("more than one decimal point");
      seen_dot = true;
      continue;
    }
    if (c < '0' || c > '9') bad("unexpected character; plain unsigned decimals only");
    seen_digit = true;
    if (__builtin_mul_overflow(parsed.units, 10, &parsed.units) ||
        __builtin_add_overflow(parsed.units, c - '0', &parsed.units)) {
      fail(ErrorCode::PrecisionOverflow,
           "entry " + std::to_string(index) + " has too many digits");
    }
    parsed.frac_digits += seen_dot;
  }
  if (!seen_digit) bad("no digits");
  // Trailing fractional zeros carry no information; dropping them keeps the
  // common scale small.
  while (parsed.frac_digits > 0 && parsed.units % 10 == 0) {
    parsed.units /= 10;
    --parsed.frac_digits;
  }
  return parsed;
}

// Target for the scaled problem when the scaled sum is not an integer: the
// marginal component is the one that would be rounded up only under the
// higher target; rounding it up beats rounding it down exactly when its
// fractional part exceeds one half, for every exponent q >= 1.
template <typename Frac>
std::int64_t pick_target(std::int64_t floor_target, Frac marginal_frac, Frac half,
                         Frac sum_frac) {
  if (marginal_frac > half) return floor_target + 1;
  if (marginal_frac < half) return floor_target;
  // Equal error: prefer the target nearer the scaled sum; equidistant goes low.
  return (sum_frac > half) ? floor_target + 1 : floor_target;
}

}  // namespace

std::string format_scaled_decimal(std::int64_t units, int precision) {
  const std::int64_t scale = kPow10[precision];
  std::string out = std::to_string(units / scale);
  if (precision > 0) {
    std::string frac = std::to_string(units % scale);
    out += '.';
    out.append(static_cast<std::size_t>(precision) - frac.size(), '0');
    out += frac;
  }
  return out;
}

std::vector<std::string> DecimalVector::to_strings() const {
  std::vector<std::string> out;
  out.reserve(scaled.size());
  for (const std::int64_t v : scaled) out.push_back(format_scaled_decimal(v, precision));
  return out;
}

std::vector<double> DecimalVector::to_doubles() const {
  std::vector<double> out;
  out.reserve(scaled.size());
  for (const std::int64_t v : scaled) {
    out.push_back(static_cast<double>(v) / static_cast<double>(kPow10[precision]));
  }
  return out;
}

std::int64_t DecimalVector::scaled_sum() const {
  std::int64_t sum = 0;
  for (const std::int64_t v : scaled) sum += v;
  return sum;
}

DecimalVector decimal_round(std::span<const double> values, int precision, double q,
                            double snap_tolerance) {
  check_precision(precision);
  check_exponent(q);
  const double scale = static_cast<double>(kPow10[precision]);
  std::vector<double> scaled_values(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) scaled_values[i] = values[i] * scale;

  const auto snapped = detail::snap_checked(scaled_values, snap_tolerance);
  const auto d = detail::decompose_arrays(snapped);
  const double sum = detail::neumaier_sum(snapped);
  const double nearest = std::nearbyint(sum);
  const double window = snap_tolerance * static_cast<double>(snapped.size());

  std::int64_t target = 0;
  if (std::fabs(sum - nearest) <= window) {
    target = static_cast<std::int64_t>(nearest);
  } else {
    const std::int64_t floor_target = static_cast<std::int64_t>(std::floor(sum));
    const std::int64_t up_floor = floor_target - d.floor_sum;
    const auto fractional_max = static_cast<std::int64_t>(d.fractional_count);
    if (up_floor < 0) {
      target = floor_target + 1;
    } else if (up_floor >= fractional_max) {
      target = floor_target;
    } else {
      const auto order = detail::fractional_by_priority(d);
      const double marginal = d.fracs[order[static_cast<std::size_t>(up_floor)]];
      target = pick_target(floor_target, marginal, 0.5,
                           sum - static_cast<double>(floor_target));
    }
  }

  const IntegerAllocation allocation = detail::select_up_roundings(d, target);
  DecimalVector out;
  out.precision = precision;
  out.scaled.assign(allocation.values().begin(), allocation.values().end());
  return out;
}

DecimalVector decimal_round(std::span<const std::string> decimals, int precision, double q) {
  check_precision(precision);
  check_exponent(q);
  if (decimals.empty()) fail(ErrorCode::EmptyInput, "input vector is empty");

  std::vector<ParsedDecimal> parsed;
  parsed.reserve(decimals.size());
  int max_digits = precision;
  for (std::size_t i = 0; i < decimals.size(); ++i) {
    parsed.push_back(parse_decimal(decimals[i], i));
    max_digits = std::max(max_digits, parsed.back().frac_digits);
  }
  if (max_digits > kMaxScaledDigits) {
    fail(ErrorCode::PrecisionOverflow, "inputs carry more than " +
                                           std::to_string(kMaxScaledDigits) +
                                           " decimal digits");
  }

  // Everything below is exact integer arithmetic at the common scale
  // 10^max_digits; the output grid divides it with quotient 10^rem_scale.
  const int rem_scale = max_digits - precision;
  const std::int64_t rem_unit = kPow10[rem_scale];
  const std::size_t n = parsed.size();
  std::vector<std::int64_t> floors(n);
  std::vector<std::int64_t> rems(n);
  std::int64_t floor_sum = 0;
  std::int64_t total = 0;
  std::size_t fractional_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t scaled = parsed[i].units;
    if (__builtin_mul_overflow(scaled, kPow10[max_digits - parsed[i].frac_digits], &scaled)) {
      fail(ErrorCode::PrecisionOverflow,
           "entry " + std::to_string(i) + " overflows at the common scale");
    }
    floors[i] = scaled / rem_unit;
    rems[i] = scaled % rem_unit;
    fractional_count += (rems[i] != 0);
    if (__builtin_add_overflow(total, scaled, &total) ||
        __builtin_add_overflow(floor_sum, floors[i], &floor_sum)) {
      fail(ErrorCode::PrecisionOverflow, "vector sum overflows at the common scale");
    }
  }

  const std::int64_t sum_rem = total % rem_unit;
  const std::int64_t sum_floor = total / rem_unit;

  // Up-rounding priority over the components off the output grid.
  std::vector<std::size_t> order;
  order.reserve(fractional_count);
  for (std::size_t i = 0; i < n; ++i) {
    if (rems[i] != 0) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rems[a] != rems[b]) return rems[a] > rems[b];
    if (floors[a] != floors[b]) return floors[a] > floors[b];
    return a < b;
  });

  std::int64_t target = sum_floor;
  if (sum_rem != 0) {
    const std::int64_t up_floor = sum_floor - floor_sum;
    if (up_floor < 0) {
      target = sum_floor + 1;
    } else if (up_floor >= static_cast<std::int64_t>(fractional_count)) {
      target = sum_floor;
    } else {
      const std::int64_t marginal = rems[order[static_cast<std::size_t>(up_floor)]];
      target = pick_target(sum_floor, 2 * marginal, rem_unit, 2 * sum_rem);
    }
  }

  const std::int64_t ups = target - floor_sum;
  if (ups < 0 || ups > static_cast<std::int64_t>(fractional_count)) {
    fail(ErrorCode::InfeasibleTarget, "scaled target outside the floor/ceiling box");
  }
  // Same boundary rule as the floating-point path: a remainder tie above one
  // half straddling the cut rounds the smaller integer parts up.
  {
    const auto cut = static_cast<std::size_t>(ups);
    if (cut > 0 && cut < order.size() && rems[order[cut - 1]] == rems[order[cut]] &&
        2 * rems[order[cut - 1]] > rem_unit) {
      const std::int64_t tied = rems[order[cut - 1]];
      std::size_t lo = cut - 1;
      while (lo > 0 && rems[order[lo - 1]] == tied) --lo;
      std::size_t hi = cut + 1;
      while (hi < order.size() && rems[order[hi]] == tied) ++hi;
      std::sort(order.begin() + static_cast<std::ptrdiff_t>(lo),
                order.begin() + static_cast<std::ptrdiff_t>(hi),
                [&](std::size_t a, std::size_t b) {
                  if (floors[a] != floors[b]) return floors[a] < floors[b];
                  return a < b;
                });
    }
  }
  DecimalVector out;
  out.precision = precision;
  out.scaled = std::move(floors);
  for (std::int64_t k = 0; k < ups; ++k) out.scaled[order[static_cast<std::size_t>(k)]] += 1;
  return out;
}

}  // namespace optround
