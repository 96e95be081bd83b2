#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "optround/core.hpp"
#include "optround/kernels.hpp"
#include "optround/methods.hpp"

using namespace optround;
namespace k = optround::kernels;

namespace {

// Sizes straddle the 4-lane vector width so every tail length is exercised.
constexpr std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 15, 64, 257, 1000};

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(0.0, 100.0);
  std::uniform_int_distribution<int> kind(0, 5);
  std::vector<double> out(n);
  for (auto& v : out) {
    v = dist(rng);
    switch (kind(rng)) {
      case 0: v = std::floor(v); break;                  // exact integer
      case 1: v = std::floor(v) + 5e-10; break;          // integer plus dust
      case 2: v = std::floor(v) - 5e-10; break;          // integer minus dust
      case 3: v = std::floor(v) + 0.5; break;            // exact half
      default: break;                                    // generic real
    }
    v = std::max(v, 0.0);
  }
  return out;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  return a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("backend dispatch") {
  CHECK(k::backend_available(k::Backend::scalar));
  CHECK(k::backend_available(k::active_backend()));
  k::set_backend(k::Backend::scalar);
  CHECK(k::active_backend() == k::Backend::scalar);
  k::reset_backend();
}

TEST_CASE("scalar and simd snapping agree bit for bit") {
  if (!k::backend_available(k::Backend::avx2)) return;
  const auto& scalar = k::table(k::Backend::scalar);
  const auto& simd = k::table(k::Backend::avx2);
  std::mt19937_64 rng(101);
  for (const std::size_t n : kSizes) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto values = random_values(rng, n);
      std::vector<double> a(n), b(n);
      scalar.snap_integers(values.data(), n, 1e-9, a.data());
      simd.snap_integers(values.data(), n, 1e-9, b.data());
      CHECK(bitwise_equal(a, b));
    }
  }
}

TEST_CASE("scalar and simd floor/frac split agree bit for bit") {
  if (!k::backend_available(k::Backend::avx2)) return;
  const auto& scalar = k::table(k::Backend::scalar);
  const auto& simd = k::table(k::Backend::avx2);
  std::mt19937_64 rng(202);
  for (const std::size_t n : kSizes) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto values = random_values(rng, n);
      std::vector<double> fa(n), ra(n), fb(n), rb(n);
      const auto sa = scalar.split_floor_frac(values.data(), n, fa.data(), ra.data());
      const auto sb = simd.split_floor_frac(values.data(), n, fb.data(), rb.data());
      CHECK(bitwise_equal(fa, fb));
      CHECK(bitwise_equal(ra, rb));
      CHECK(sa.floor_sum == sb.floor_sum);  // exact integer bookkeeping
      CHECK(sa.fractional_count == sb.fractional_count);
    }
  }
}

TEST_CASE("error reductions agree within reduction-order tolerance") {
  if (!k::backend_available(k::Backend::avx2)) return;
  const auto& scalar = k::table(k::Backend::scalar);
  const auto& simd = k::table(k::Backend::avx2);
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> updown(0, 1);
  for (const std::size_t n : kSizes) {
    auto x = random_values(rng, n);
    for (auto& v : x) v += 0.25;  // keep positive for the relative variant
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = std::floor(x[i]) + updown(rng);
    for (const double q : {1.0, 2.0, 3.0, 2.5}) {
      const double a = scalar.abs_err_pow_sum(x.data(), m.data(), n, q);
      const double b = simd.abs_err_pow_sum(x.data(), m.data(), n, q);
      CHECK(a == doctest::Approx(b).epsilon(1e-12));
      const double ra = scalar.rel_err_pow_sum(x.data(), m.data(), n, q);
      const double rb = simd.rel_err_pow_sum(x.data(), m.data(), n, q);
      CHECK(ra == doctest::Approx(rb).epsilon(1e-12));
    }
  }
}

TEST_CASE("scalar and simd randomized trials agree exactly") {
  if (!k::backend_available(k::Backend::avx2)) return;
  const auto& scalar = k::table(k::Backend::scalar);
  const auto& simd = k::table(k::Backend::avx2);
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> frac_dist(0.0, 1.0);
  std::uniform_int_distribution<int> bit(0, 1);
  for (const std::size_t n : {std::size_t{1}, std::size_t{3}, std::size_t{4}, std::size_t{6},
                              std::size_t{9}, std::size_t{16}, std::size_t{21}}) {
    std::vector<double> fracs(n);
    std::vector<std::uint8_t> up_opt(n);
    std::int64_t shortfall = 0;
    for (std::size_t i = 0; i < n; ++i) {
      fracs[i] = (i % 3 == 0) ? 0.0 : frac_dist(rng);
      up_opt[i] = fracs[i] > 0.0 ? static_cast<std::uint8_t>(bit(rng)) : 0;
      shortfall += up_opt[i];
    }
    std::vector<std::uint64_t> counts_a(n, 0), counts_b(n, 0);
    std::uint64_t feas_a = 0, feas_b = 0, opt_a = 0, opt_b = 0;
    scalar.bernoulli_trials(fracs.data(), up_opt.data(), n, 5150, 0, 4000, shortfall,
                            counts_a.data(), &feas_a, &opt_a);
    simd.bernoulli_trials(fracs.data(), up_opt.data(), n, 5150, 0, 4000, shortfall,
                          counts_b.data(), &feas_b, &opt_b);
    CHECK(counts_a == counts_b);
    CHECK(feas_a == feas_b);
    CHECK(opt_a == opt_b);
  }
}

TEST_CASE("trial chunking is order-independent") {
  const auto& scalar = k::table(k::Backend::scalar);
  const std::vector<double> fracs{0.4, 0.35, 0.25, 0.0, 0.6};
  const std::vector<std::uint8_t> up_opt{1, 0, 0, 0, 1};
  std::vector<std::uint64_t> whole(fracs.size(), 0), parts(fracs.size(), 0);
  std::uint64_t feas_whole = 0, feas_parts = 0, opt_whole = 0, opt_parts = 0;
  scalar.bernoulli_trials(fracs.data(), up_opt.data(), fracs.size(), 9, 0, 1000, 2,
                          whole.data(), &feas_whole, &opt_whole);
  for (const auto [b, e] : {std::pair<std::uint64_t, std::uint64_t>{0, 137},
                            {137, 612},
                            {612, 1000}}) {
    scalar.bernoulli_trials(fracs.data(), up_opt.data(), fracs.size(), 9, b, e, 2,
                            parts.data(), &feas_parts, &opt_parts);
  }
  CHECK(whole == parts);
  CHECK(feas_whole == feas_parts);
  CHECK(opt_whole == opt_parts);
}

TEST_CASE("uniform01 stays in [0, 1)") {
  std::mt19937_64 rng(777);
  for (int i = 0; i < 10000; ++i) {
    const double u = k::uniform01(rng());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(k::uniform01(0) == 0.0);
  CHECK(k::uniform01(~std::uint64_t{0}) < 1.0);
}

TEST_CASE("library results are identical under a pinned scalar backend") {
  if (!k::backend_available(k::Backend::avx2)) return;
  std::mt19937_64 rng(515151);
  std::uniform_real_distribution<double> dist(0.0, 10.0);
  std::vector<double> values(37);
  for (auto& v : values) v = dist(rng);
  double sum = 0.0;
  for (const double v : values) sum += v;
  values.back() += std::ceil(sum) - sum;

  k::set_backend(k::Backend::avx2);
  const RoundingProblem p_simd(values);
  const auto alloc_simd = oric_round(p_simd);
  const auto mc_simd = monte_carlo_report(p_simd, 20000, 77);

  k::set_backend(k::Backend::scalar);
  const RoundingProblem p_scalar(values);
  const auto alloc_scalar = oric_round(p_scalar);
  const auto mc_scalar = monte_carlo_report(p_scalar, 20000, 77);
  k::reset_backend();

  CHECK(alloc_simd == alloc_scalar);
  CHECK(std::vector<double>(p_simd.values().begin(), p_simd.values().end()) ==
        std::vector<double>(p_scalar.values().begin(), p_scalar.values().end()));
  CHECK(mc_simd.empirical_mean == mc_scalar.empirical_mean);
  CHECK(mc_simd.feasibility_rate == mc_scalar.feasibility_rate);
  CHECK(mc_simd.optimality_rate == mc_scalar.optimality_rate);
}
