#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "optround/core.hpp"
#include "optround/oracle.hpp"
#include "test_util.hpp"

using namespace optround;
using testutil::problem;
using testutil::vec;

TEST_CASE("enumerate_feasible yields choose(k, I) allocations") {
  CHECK(enumerate_feasible(std::vector<double>{2.25, 3.4, 4.35}, 10).size() == 3);
  CHECK(enumerate_feasible(std::vector<double>{5.0, 7.0}, 12).size() == 1);
  // k = 4 halves, I = 2 -> C(4,2) = 6
  CHECK(enumerate_feasible(std::vector<double>{0.5, 0.5, 0.5, 0.5}, 2).size() == 6);
}

TEST_CASE("enumerate_feasible allocations are feasible box points") {
  const std::vector<double> x{1.3, 0.7, 2.5, 4.0, 0.5};
  for (const auto& alloc : enumerate_feasible(x, 9)) {
    CHECK(testutil::sum_of(alloc) == 9);
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(static_cast<double>(alloc[i]) >= std::floor(x[i]));
      CHECK(static_cast<double>(alloc[i]) <= std::ceil(x[i]));
    }
  }
}

TEST_CASE("enumeration cap") {
  std::vector<double> x(21, 0.5);
  x.push_back(0.5);  // 22 halves, integer sum 11
  CHECK(testutil::thrown_code([&] { enumerate_feasible(x, 11); }) ==
        ErrorCode::TooManyComponents);
}

TEST_CASE("brute_force_optima on the worked instance") {
  const auto result = brute_force_optima(std::vector<double>{2.25, 3.4, 4.35}, 10, 1.0);
  CHECK(result.evaluated == 3);
  CHECK(result.min_value == doctest::Approx(1.2).epsilon(1e-12));
  REQUIRE(result.argmins.size() == 1);
  CHECK(vec(result.argmins[0]) == std::vector<std::int64_t>{2, 4, 4});
}

TEST_CASE("brute_force_optima finds both argmins under an exact tie") {
  const auto result = brute_force_optima(std::vector<double>{0.375, 2.375, 0.25}, 3, 2.0);
  REQUIRE(result.argmins.size() == 2);
  CHECK(vec(result.argmins[0]) == std::vector<std::int64_t>{1, 2, 0});
  CHECK(vec(result.argmins[1]) == std::vector<std::int64_t>{0, 3, 0});
}

TEST_CASE("brute_force_optima on integer input") {
  const auto result = brute_force_optima(std::vector<double>{5.0, 7.0}, 12, 2.0);
  CHECK(result.min_value == 0.0);
  REQUIRE(result.argmins.size() == 1);
}

TEST_CASE("brute_force_best_relative prefers the smaller relative-error sum") {
  CHECK(vec(brute_force_best_relative(std::vector<double>{0.375, 2.375, 0.25}, 3, 1.0)) ==
        std::vector<std::int64_t>{0, 3, 0});
  CHECK(vec(brute_force_best_relative(std::vector<double>{2.25, 3.4, 4.35}, 10, 1.0)) ==
        std::vector<std::int64_t>{2, 4, 4});
  CHECK(testutil::thrown_code([] {
          brute_force_best_relative(std::vector<double>{0.0, 1.5, 0.5}, 2, 1.0);
        }) == ErrorCode::ZeroComponent);
}

TEST_CASE("oric_round is optimal for every exponent on random instances") {
  std::mt19937_64 rng(777001);
  for (int iter = 0; iter < 200; ++iter) {
    const auto values = testutil::random_integer_sum_instance(rng, 2, 9);
    const auto p = problem(values);
    const auto mine = oric_round(p);
    for (const double q : {1.0, 2.0, 3.0}) {
      const auto oracle = brute_force_optima(p.values(), p.target(), q, p.snap_tolerance());
      const double err = lq_error(p.values(), mine, q);
      CHECK(err <= oracle.min_value * (1.0 + 1e-12));
      CHECK(std::any_of(oracle.argmins.begin(), oracle.argmins.end(),
                        [&](const IntegerAllocation& a) { return a == mine; }));
    }
  }
}

TEST_CASE("argmin sets coincide across exponents") {
  std::mt19937_64 rng(424242);
  for (int iter = 0; iter < 100; ++iter) {
    const auto values = testutil::random_duplicated_frac_instance(rng);
    const auto p = problem(values);
    std::set<std::vector<std::int64_t>> reference;
    for (const double q : {1.0, 2.0, 3.0}) {
      const auto oracle = brute_force_optima(p.values(), p.target(), q, p.snap_tolerance());
      std::set<std::vector<std::int64_t>> argmins;
      for (const auto& a : oracle.argmins) argmins.insert(vec(a));
      if (q == 1.0) {
        reference = argmins;
      } else {
        CHECK(argmins == reference);
      }
    }
  }
}

TEST_CASE("oric_round equals brute_force_best_relative on tied instances") {
  std::mt19937_64 rng(31415);
  for (int iter = 0; iter < 200; ++iter) {
    const auto values = testutil::random_duplicated_frac_instance(rng);
    const auto p = problem(values);
    const auto mine = oric_round(p);
    for (const double q : {1.0, 2.0}) {
      CHECK(vec(mine) ==
            vec(brute_force_best_relative(p.values(), p.target(), q, p.snap_tolerance())));
    }
  }
}

TEST_CASE("brute_force_separable on quadratic objectives") {
  const std::vector<double> x{2.25, 3.4, 4.35};
  std::vector<SeparableObjective::Component> components;
  for (const double xi : x) {
    components.push_back([xi](double u) { return (u - xi) * (u - xi); });
  }
  const SeparableObjective objective{std::move(components)};
  const RelaxedSolution relaxed{x, 10};
  const auto result = brute_force_separable(objective, relaxed);
  REQUIRE(result.argmins.size() == 1);
  CHECK(vec(result.argmins[0]) == std::vector<std::int64_t>{2, 4, 4});

  // integer relaxed solution: the box is a single point
  std::vector<SeparableObjective::Component> flat{[](double u) { return (u - 3) * (u - 3); },
                                                  [](double u) { return (u - 4) * (u - 4); }};
  const auto single = brute_force_separable(SeparableObjective{std::move(flat)},
                                            RelaxedSolution{{3.0, 4.0}, 7});
  CHECK(single.evaluated == 1);
  CHECK(vec(single.argmins[0]) == std::vector<std::int64_t>{3, 4});
}

TEST_CASE("brute_force_separable weighted quadratic") {
  const std::vector<double> x{0.4, 0.6};
  const std::vector<double> w{1.0, 10.0};
  std::vector<SeparableObjective::Component> components;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const double wi = w[i];
    components.push_back([xi, wi](double u) { return wi * (u - xi) * (u - xi); });
  }
  const auto result = brute_force_separable(SeparableObjective{std::move(components)},
                                            RelaxedSolution{x, 1});
  REQUIRE(result.argmins.size() == 1);
  CHECK(vec(result.argmins[0]) == std::vector<std::int64_t>{0, 1});
  CHECK(result.evaluated == 2);
}
