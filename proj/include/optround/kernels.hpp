#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>

namespace optround::kernels {

// Data-parallel inner loops behind the library. Every kernel exists as a
// scalar reference implementation and, on x86-64 hardware that supports it,
// an AVX2 variant selected at runtime. Contracts:
//   * snap_integers, split_floor_frac and bernoulli_trials produce
//     bit-identical results on every backend (pure integer pipelines or
//     exact floating-point operations).
//   * abs_err_pow_sum / rel_err_pow_sum may differ between backends by
//     reduction order only; results agree to ~1e-14 relative.
// Scalar paths assume the default round-to-nearest-even FP environment.

enum class Backend { scalar, avx2 };

bool backend_available(Backend backend) noexcept;
Backend active_backend() noexcept;
/// Pin the dispatch to one backend (throws Error if unavailable).
void set_backend(Backend backend);
/// Restore runtime detection.
void reset_backend() noexcept;

struct DecomposeSums {
  double floor_sum = 0.0;  // exact while the vector sum stays below 2^53
  std::size_t fractional_count = 0;
};

struct KernelTable {
  // out[i] = nearest integer to in[i] when within tol, else in[i].
  // Snapped values are normalized so that -0.0 never appears.
  void (*snap_integers)(const double* in, std::size_t n, double tol, double* out);

  // floors[i] = floor(v); fracs[i] = v - floors[i] (exact in IEEE double).
  DecomposeSums (*split_floor_frac)(const double* values, std::size_t n, double* floors,
                                    double* fracs);

  // sum_i |x_i - m_i|^q with fast paths for q == 1 and q == 2.
  double (*abs_err_pow_sum)(const double* x, const double* m, std::size_t n, double q);

  // sum_i (|x_i - m_i| / x_i)^q; caller guarantees x_i > 0.
  double (*rel_err_pow_sum)(const double* x, const double* m, std::size_t n, double q);

  // Independent Bernoulli(fracs[i]) up-rounding over trials [trial_begin,
  // trial_end). Accumulates per-component up counts, the number of trials
  // whose up count equals `shortfall`, and the number matching up_optimal.
  void (*bernoulli_trials)(const double* fracs, const std::uint8_t* up_optimal, std::size_t n,
                           std::uint64_t seed, std::uint64_t trial_begin, std::uint64_t trial_end,
                           std::int64_t shortfall, std::uint64_t* up_counts,
                           std::uint64_t* feasible, std::uint64_t* optimal_hits);
};

const KernelTable& table(Backend backend);
const KernelTable& active();

// Span wrappers over the active backend.
void snap_integers(std::span<const double> in, double tol, std::span<double> out);
DecomposeSums split_floor_frac(std::span<const double> values, std::span<double> floors,
                               std::span<double> fracs);
double abs_err_pow_sum(std::span<const double> x, std::span<const double> m, double q);
double rel_err_pow_sum(std::span<const double> x, std::span<const double> m, double q);

// ---------------------------------------------------------------------------
// Counter-based pseudorandom draws shared by every backend. A draw depends
// only on (seed, trial, component), so serial and chunked execution agree.
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kTrialGamma = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kComponentGamma = 0xD1B54A32D192ED03ULL;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t trial_key(std::uint64_t seed, std::uint64_t trial) noexcept {
  return mix64(seed + (trial + 1) * kTrialGamma);
}

// Map 64 random bits to a double in [0, 1) using the top 52 bits.
inline double uniform01(std::uint64_t bits) noexcept {
  const std::uint64_t mantissa = (bits >> 12) | 0x3FF0000000000000ULL;
  double d;
  std::memcpy(&d, &mantissa, sizeof d);
  return d - 1.0;
}

inline double uniform_draw(std::uint64_t key, std::uint64_t component) noexcept {
  return uniform01(mix64(key + (component + 1) * kComponentGamma));
}

}  // namespace optround::kernels
