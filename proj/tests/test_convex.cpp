#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "optround/convex.hpp"
#include "optround/core.hpp"
#include "optround/oracle.hpp"
#include "test_util.hpp"

using namespace optround;
using testutil::vec;

namespace {

SeparableObjective quadratic(const std::vector<double>& centers,
                             const std::vector<double>& weights = {}) {
  std::vector<SeparableObjective::Component> components;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double c = centers[i];
    const double w = weights.empty() ? 1.0 : weights[i];
    components.push_back([c, w](double u) { return w * (u - c) * (u - c); });
  }
  return SeparableObjective{std::move(components)};
}

SeparableObjective abs_power(const std::vector<double>& centers, double q) {
  std::vector<SeparableObjective::Component> components;
  for (const double c : centers) {
    components.push_back([c, q](double u) { return std::pow(std::fabs(u - c), q); });
  }
  return SeparableObjective{std::move(components)};
}

}  // namespace

TEST_CASE("marginal_costs of a quadratic objective") {
  const std::vector<double> x{0.3, 0.8};
  const auto costs = marginal_costs(quadratic(x), RelaxedSolution{x, 1});
  REQUIRE(costs.size() == 2);
  CHECK(costs[0].index == 0);
  CHECK(costs[0].delta == doctest::Approx(0.7 * 0.7 - 0.3 * 0.3).epsilon(1e-12));
  CHECK(costs[1].index == 1);
  CHECK(costs[1].delta == doctest::Approx(0.2 * 0.2 - 0.8 * 0.8).epsilon(1e-12));
}

TEST_CASE("marginal_costs excludes integer components") {
  const std::vector<double> x{3.0, 4.0};
  CHECK(marginal_costs(quadratic(x), RelaxedSolution{x, 7}).empty());

  const std::vector<double> mixed{1.0, 0.25, 2.75};
  const auto costs = marginal_costs(quadratic(mixed), RelaxedSolution{mixed, 4});
  REQUIRE(costs.size() == 2);
  CHECK(costs[0].index == 1);
  CHECK(costs[1].index == 2);
}

TEST_CASE("marginal_costs with weights") {
  // weights steer which up-rounding is cheap: deltas 0.2 and 1.0 for the
  // first two components (third added to give the vector an integer sum)
  const std::vector<double> x{0.4, 0.45, 1.15};
  const std::vector<double> w{1.0, 10.0, 1.0};
  const auto costs = marginal_costs(quadratic(x, w), RelaxedSolution{x, 2});
  REQUIRE(costs.size() == 3);
  CHECK(costs[0].delta == doctest::Approx(1.0 * (0.36 - 0.16)).epsilon(1e-9));
  CHECK(costs[1].delta == doctest::Approx(10.0 * (0.3025 - 0.2025)).epsilon(1e-9));
}

TEST_CASE("round_separable quadratic reduces to the Lq solution") {
  const std::vector<double> x{2.25, 3.4, 4.35};
  const auto allocation = round_separable(quadratic(x), RelaxedSolution{x, 10});
  CHECK(vec(allocation) == std::vector<std::int64_t>{2, 4, 4});
}

TEST_CASE("round_separable keeps integer relaxed solutions") {
  const std::vector<double> x{3.0, 4.0};
  CHECK(vec(round_separable(quadratic(x), RelaxedSolution{x, 7})) ==
        std::vector<std::int64_t>{3, 4});
}

TEST_CASE("round_separable weighted quadratic picks the cheap up-rounding") {
  const std::vector<double> x{0.4, 0.6};
  const std::vector<double> w{1.0, 10.0};
  const auto allocation = round_separable(quadratic(x, w), RelaxedSolution{x, 1});
  CHECK(vec(allocation) == std::vector<std::int64_t>{0, 1});
}

TEST_CASE("round_separable validates the relaxed solution") {
  const std::vector<double> x{0.4, 0.4};
  CHECK(testutil::thrown_code([&] { round_separable(quadratic(x), RelaxedSolution{x, 1}); }) ==
        ErrorCode::InfeasibleTarget);
  const std::vector<double> y{0.5, 0.5};
  CHECK(testutil::thrown_code([&] {
          round_separable(quadratic({0.5, 0.5, 0.5}), RelaxedSolution{y, 1});
        }) == ErrorCode::LengthMismatch);
}

TEST_CASE("round_separable surfaces evaluation failures") {
  std::vector<SeparableObjective::Component> bad;
  bad.push_back([](double) { return std::numeric_limits<double>::quiet_NaN(); });
  bad.push_back([](double u) { return u * u; });
  const SeparableObjective objective{std::move(bad)};
  CHECK(testutil::thrown_code([&] {
          round_separable(objective, RelaxedSolution{{0.5, 1.5}, 2});
        }) == ErrorCode::EvaluationFailure);

  std::vector<SeparableObjective::Component> throwing;
  throwing.push_back([](double) -> double { throw std::runtime_error("boom"); });
  throwing.push_back([](double u) { return u * u; });
  const SeparableObjective objective2{std::move(throwing)};
  CHECK(testutil::thrown_code([&] {
          round_separable(objective2, RelaxedSolution{{0.5, 1.5}, 2});
        }) == ErrorCode::EvaluationFailure);
}

TEST_CASE("convexity_spot_check distinguishes convex from concave") {
  const std::vector<double> x{0.5, 1.5};
  CHECK(convexity_spot_check(quadratic(x), RelaxedSolution{x, 2}));
  std::vector<SeparableObjective::Component> concave;
  for (const double c : x) {
    concave.push_back([c](double u) { return -(u - c) * (u - c); });
  }
  CHECK(!convexity_spot_check(SeparableObjective{std::move(concave)}, RelaxedSolution{x, 2}));
}

TEST_CASE("round_separable matches the exhaustive oracle on weighted quadratics") {
  std::mt19937_64 rng(123321);
  std::uniform_real_distribution<double> weight_dist(0.1, 10.0);
  for (int iter = 0; iter < 300; ++iter) {
    const auto x = testutil::random_integer_sum_instance(rng, 2, 10, 8.0);
    std::vector<double> w(x.size());
    for (auto& wi : w) wi = weight_dist(rng);
    const auto objective = quadratic(x, w);
    const RelaxedSolution relaxed{x, static_cast<std::int64_t>(std::llround(
                                         detail::neumaier_sum(x)))};
    const auto mine = round_separable(objective, relaxed);
    const auto oracle = brute_force_separable(objective, relaxed);
    const double mine_value = objective.evaluate(mine.values());
    CHECK(mine_value <= oracle.min_value * (1.0 + 1e-12) + 1e-15);
  }
}

TEST_CASE("round_separable output stays in the floor/ceiling box") {
  std::mt19937_64 rng(9102);
  std::uniform_real_distribution<double> weight_dist(0.1, 10.0);
  for (int iter = 0; iter < 100; ++iter) {
    const auto x = testutil::random_integer_sum_instance(rng, 2, 10, 8.0);
    std::vector<double> w(x.size());
    for (auto& wi : w) wi = weight_dist(rng);
    const RelaxedSolution relaxed{
        x, static_cast<std::int64_t>(std::llround(detail::neumaier_sum(x)))};
    const auto allocation = round_separable(quadratic(x, w), relaxed);
    CHECK(testutil::sum_of(allocation.values()) == relaxed.target);
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(static_cast<double>(allocation[i]) >= std::floor(x[i]));
      CHECK(static_cast<double>(allocation[i]) <= std::ceil(x[i]));
    }
  }
}

TEST_CASE("round_separable reproduces oric_round for |u - x|^q objectives") {
  std::mt19937_64 rng(456654);
  for (int iter = 0; iter < 100; ++iter) {
    const auto x = testutil::random_integer_sum_instance(rng, 2, 10);
    const RoundingProblem p(x);
    // continuous draws: fractional parts are distinct almost surely
    for (const double q : {1.5, 2.0, 3.0}) {
      const auto mine = round_separable(abs_power(x, q), RelaxedSolution{x, p.target()});
      CHECK(vec(mine) == vec(oric_round(p)));
    }
  }
}
