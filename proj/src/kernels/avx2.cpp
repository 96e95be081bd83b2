// AVX2 variants of the kernel table. Compiled with -mavx2 and only entered
// when runtime detection reports AVX2 support. The RNG pipeline is pure
// 64-bit integer arithmetic and matches the scalar backend bit for bit; the
// same holds for snapping and floor/frac splitting (exact FP operations).
// Only the error-sum reductions differ, by accumulation order.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <immintrin.h>

#include "kernels/tables.hpp"
#include "optround/kernels.hpp"

namespace optround::kernels {

namespace {

inline __m256d abs_pd(__m256d v) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  return _mm256_andnot_pd(sign_mask, v);
}

inline double hsum_pd(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s2 = _mm_add_pd(lo, hi);
  const __m128d s1 = _mm_add_sd(s2, _mm_unpackhi_pd(s2, s2));
  return _mm_cvtsd_f64(s1);
}

// Low 64 bits of a 64x64 multiply (AVX2 has no epi64 multiply).
inline __m256i mul64lo(__m256i a, __m256i b) {
  const __m256i a_hi = _mm256_srli_epi64(a, 32);
  const __m256i b_hi = _mm256_srli_epi64(b, 32);
  const __m256i lo = _mm256_mul_epu32(a, b);
  const __m256i cross =
      _mm256_add_epi64(_mm256_mul_epu32(a_hi, b), _mm256_mul_epu32(a, b_hi));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i mix64_vec(__m256i z) {
  const __m256i c1 = _mm256_set1_epi64x(static_cast<long long>(0xBF58476D1CE4E5B9ULL));
  const __m256i c2 = _mm256_set1_epi64x(static_cast<long long>(0x94D049BB133111EBULL));
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 30));
  z = mul64lo(z, c1);
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 27));
  z = mul64lo(z, c2);
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
  return z;
}

// (bits >> 12) | 0x3FF0... reinterpreted as double, minus 1: uniform in [0,1).
inline __m256d uniform01_vec(__m256i bits) {
  const __m256i expo = _mm256_set1_epi64x(static_cast<long long>(0x3FF0000000000000ULL));
  const __m256i mant = _mm256_or_si256(_mm256_srli_epi64(bits, 12), expo);
  return _mm256_sub_pd(_mm256_castsi256_pd(mant), _mm256_set1_pd(1.0));
}

void snap_integers_avx2(const double* in, std::size_t n, double tol, double* out) {
  const __m256d tolv = _mm256_set1_pd(tol);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(in + i);
    const __m256d nearest =
        _mm256_round_pd(v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    const __m256d dist = abs_pd(_mm256_sub_pd(v, nearest));
    const __m256d within = _mm256_cmp_pd(dist, tolv, _CMP_LE_OQ);
    const __m256d snapped = _mm256_add_pd(nearest, zero);  // -0.0 -> +0.0
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(v, snapped, within));
  }
  for (; i < n; ++i) {
    const double v = in[i];
    const double nearest = std::nearbyint(v);
    out[i] = (std::fabs(v - nearest) <= tol) ? nearest + 0.0 : v;
  }
}

DecomposeSums split_floor_frac_avx2(const double* values, std::size_t n, double* floors,
                                    double* fracs) {
  DecomposeSums sums;
  __m256d floor_acc = _mm256_setzero_pd();
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(values + i);
    const __m256d f = _mm256_floor_pd(v);
    const __m256d r = _mm256_sub_pd(v, f);
    _mm256_storeu_pd(floors + i, f);
    _mm256_storeu_pd(fracs + i, r);
    floor_acc = _mm256_add_pd(floor_acc, f);
    const __m256d nonzero = _mm256_cmp_pd(r, zero, _CMP_NEQ_OQ);
    sums.fractional_count +=
        static_cast<std::size_t>(_mm_popcnt_u32(_mm256_movemask_pd(nonzero) & 0xF));
  }
  // Lane sums of exact integers: order-independent, identical to scalar.
  sums.floor_sum = hsum_pd(floor_acc);
  for (; i < n; ++i) {
    const double f = std::floor(values[i]);
    const double r = values[i] - f;
    floors[i] = f;
    fracs[i] = r;
    sums.floor_sum += f;
    sums.fractional_count += (r != 0.0);
  }
  return sums;
}

double abs_err_pow_sum_avx2(const double* x, const double* m, std::size_t n, double q) {
  if (q != 1.0 && q != 2.0) return scalar_table().abs_err_pow_sum(x, m, n, q);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  if (q == 1.0) {
    for (; i + 4 <= n; i += 4) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(m + i));
      acc = _mm256_add_pd(acc, abs_pd(d));
    }
  } else {
    for (; i + 4 <= n; i += 4) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(m + i));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
  }
  double sum = hsum_pd(acc);
  for (; i < n; ++i) {
    const double d = x[i] - m[i];
    sum += (q == 1.0) ? std::fabs(d) : d * d;
  }
  return sum;
}

double rel_err_pow_sum_avx2(const double* x, const double* m, std::size_t n, double q) {
  if (q != 1.0 && q != 2.0) return scalar_table().rel_err_pow_sum(x, m, n, q);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d r = _mm256_div_pd(_mm256_sub_pd(xv, _mm256_loadu_pd(m + i)), xv);
    acc = _mm256_add_pd(acc, q == 1.0 ? abs_pd(r) : _mm256_mul_pd(r, r));
  }
  double sum = hsum_pd(acc);
  for (; i < n; ++i) {
    const double r = (x[i] - m[i]) / x[i];
    sum += (q == 1.0) ? std::fabs(r) : r * r;
  }
  return sum;
}

void bernoulli_trials_avx2(const double* fracs, const std::uint8_t* up_optimal, std::size_t n,
                           std::uint64_t seed, std::uint64_t trial_begin,
                           std::uint64_t trial_end, std::int64_t shortfall,
                           std::uint64_t* up_counts, std::uint64_t* feasible,
                           std::uint64_t* optimal_hits) {
  const std::size_t vec_n = n - (n % 4);
  // Expected 4-bit up patterns per chunk, for the match-with-optimal test.
  std::vector<std::uint32_t> expected_bits(vec_n / 4, 0);
  for (std::size_t i = 0; i < vec_n; ++i) {
    if (up_optimal[i]) expected_bits[i / 4] |= 1u << (i % 4);
  }

  const __m256i gamma4 =
      _mm256_set1_epi64x(static_cast<long long>(4 * kComponentGamma));
  const __m256i first_offsets = _mm256_setr_epi64x(
      static_cast<long long>(1 * kComponentGamma), static_cast<long long>(2 * kComponentGamma),
      static_cast<long long>(3 * kComponentGamma), static_cast<long long>(4 * kComponentGamma));

  for (std::uint64_t t = trial_begin; t < trial_end; ++t) {
    const std::uint64_t key = trial_key(seed, t);
    const __m256i key_vec = _mm256_set1_epi64x(static_cast<long long>(key));
    __m256i ctr = _mm256_add_epi64(key_vec, first_offsets);

    std::int64_t ups = 0;
    bool match = true;
    for (std::size_t i = 0; i < vec_n; i += 4) {
      const __m256d u = uniform01_vec(mix64_vec(ctr));
      ctr = _mm256_add_epi64(ctr, gamma4);
      const __m256d up_mask = _mm256_cmp_pd(u, _mm256_loadu_pd(fracs + i), _CMP_LT_OQ);
      const std::uint32_t bits =
          static_cast<std::uint32_t>(_mm256_movemask_pd(up_mask)) & 0xF;
      ups += _mm_popcnt_u32(bits);
      match &= (bits == expected_bits[i / 4]);
      // mask lanes are all-ones (== -1): subtracting adds 1 per up component.
      const __m256i counts =
          _mm256_loadu_si256(reinterpret_cast<const __m256i*>(up_counts + i));
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(up_counts + i),
                          _mm256_sub_epi64(counts, _mm256_castpd_si256(up_mask)));
    }
    for (std::size_t i = vec_n; i < n; ++i) {
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

const KernelTable& avx2_table() {
  static const KernelTable t{
      snap_integers_avx2, split_floor_frac_avx2, abs_err_pow_sum_avx2,
      rel_err_pow_sum_avx2, bernoulli_trials_avx2,
  };
  return t;
}

}  // namespace optround::kernels
