// Command-line front end: sum-preserving rounding, decimal grid rounding,
// largest-remainder apportionment, baseline-method comparison and the
// exhaustive oracle, over CSV or JSON input.
//
// Output is JSON on stdout (one report per run, keys in fixed order, floats
// with 17 significant digits, so identical inputs give byte-identical
// output); diagnostics go to stderr. Exit codes: 0 success, 2 invalid input,
// 3 infeasible target.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "optround/apportion.hpp"
#include "optround/core.hpp"
#include "optround/decimal.hpp"
#include "optround/methods.hpp"
#include "optround/oracle.hpp"

namespace {

using optround::Error;
using optround::ErrorCode;

// ---------------------------------------------------------------------------
// deterministic JSON emission
// ---------------------------------------------------------------------------

std::string jnum(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string jnum(std::int64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%" PRId64, v);
  return buf;
}

std::string jnum(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%" PRIu64, v);
  return buf;
}

std::string jstr(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

template <typename T, typename Fn>
std::string jarray(const std::vector<T>& items, Fn&& format) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i != 0) out += ',';
    out += format(items[i]);
  }
  out += ']';
  return out;
}

std::string jarray(std::span<const std::int64_t> items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i != 0) out += ',';
    out += jnum(items[i]);
  }
  out += ']';
  return out;
}

std::string jfields(std::initializer_list<std::pair<const char*, std::string>> fields) {
  std::string out = "{";
  bool first = true;
  for (const auto& [key, value] : fields) {
    if (!first) out += ',';
    first = false;
    out += jstr(key);
    out += ':';
    out += value;
  }
  out += '}';
  return out;
}

std::string jopt(const std::optional<double>& v) { return v ? jnum(*v) : "null"; }

// ---------------------------------------------------------------------------
// input handling
// ---------------------------------------------------------------------------

struct InputVector {
  std::vector<double> numbers;
  std::vector<std::string> tokens;  // raw CSV tokens or JSON strings
  bool all_strings = false;         // true when no bare JSON number appeared
};

std::string read_stream(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) optround::fail(ErrorCode::ParseError, "cannot open input file '" + path + "'");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& token) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    optround::fail(ErrorCode::ParseError, "cannot parse '" + token + "' as a number");
  }
}

InputVector parse_input(const std::string& text) {
  InputVector input;
  const std::string body = trim(text);
  if (body.empty()) optround::fail(ErrorCode::ParseError, "empty input");

  if (body.front() == '[') {
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      optround::fail(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
    }
    if (!parsed.is_array() || parsed.empty()) {
      optround::fail(ErrorCode::ParseError, "expected a non-empty JSON array");
    }
    input.all_strings = true;
    for (const auto& item : parsed) {
      if (item.is_number()) {
        input.all_strings = false;
        input.numbers.push_back(item.get<double>());
        input.tokens.push_back(item.dump());
      } else if (item.is_string()) {
        const std::string token = item.get<std::string>();
        input.tokens.push_back(token);
        input.numbers.push_back(parse_number(token));
      } else {
        optround::fail(ErrorCode::ParseError, "array entries must be numbers or strings");
      }
    }
    return input;
  }

  // CSV: one value per line, or comma-separated values on any line
  input.all_strings = true;
  std::string token;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    const char c = (i < body.size()) ? body[i] : ',';
    if (c == ',' || c == '\n') {
      const std::string item = trim(token);
      token.clear();
      if (item.empty()) continue;
      input.tokens.push_back(item);
      input.numbers.push_back(parse_number(item));
    } else {
      token += c;
    }
  }
  if (input.numbers.empty()) optround::fail(ErrorCode::ParseError, "no values in input");
  return input;
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

struct CommonOptions {
  std::string input_path = "-";
  bool pretty = false;
};

optround::ComponentDecomposition decompose_values(std::span<const double> snapped) {
  optround::ComponentDecomposition d;
  d.entries.resize(snapped.size());
  for (std::size_t i = 0; i < snapped.size(); ++i) {
    const double fl = std::floor(snapped[i]);
    d.entries[i] = {i, static_cast<std::int64_t>(fl), snapped[i] - fl};
  }
  return d;
}

int cmd_round(const CommonOptions& common, double q, double tolerance,
              std::optional<std::int64_t> target_flag) {
  const auto input = parse_input(read_stream(common.input_path));

  std::vector<double> snapped;
  std::int64_t target = 0;
  if (target_flag) {
    snapped = optround::detail::snap_checked(input.numbers, tolerance);
    target = *target_flag;
  } else {
    const optround::RoundingProblem problem(input.numbers, tolerance);
    snapped.assign(problem.values().begin(), problem.values().end());
    target = problem.target();
  }
  const auto allocation = optround::round_to_target(snapped, target, tolerance);
  const auto decomposition = decompose_values(snapped);
  const std::int64_t deficit = optround::shortfall(decomposition, target);
  const auto order = optround::oric_order(decomposition);
  const auto report = optround::error_report(snapped, allocation, q);
  const double l1 = optround::lq_error(snapped, allocation, 1.0);
  const double l2 = optround::lq_error(snapped, allocation, 2.0);

  if (common.pretty) {
    std::printf("target      %" PRId64 "\n", target);
    std::printf("shortfall   %" PRId64 "\n", deficit);
    std::printf("%8s  %-22s %s\n", "index", "value", "rounded");
    for (std::size_t i = 0; i < snapped.size(); ++i) {
      std::printf("%8zu  %-22.17g %" PRId64 "\n", i, snapped[i], allocation[i]);
    }
    std::printf("errors: l1=%.17g l2=%.17g l%.3g=%.17g\n", l1, l2, q, report.lq_error);
    return 0;
  }

  const std::string errors = jfields({
      {"l1", jnum(l1)},
      {"l2", jnum(l2)},
      {"lq", jnum(report.lq_error)},
      {"relative_sum", jopt(report.relative_sum)},
      {"relative_product", jopt(report.relative_product)},
  });
  std::string order_json = jarray(order, [](std::size_t i) {
    return jnum(static_cast<std::int64_t>(i));
  });
  std::printf("%s\n", jfields({
                          {"allocation", jarray(allocation.values())},
                          {"target", jnum(target)},
                          {"shortfall", jnum(deficit)},
                          {"errors", errors},
                          {"order", order_json},
                      })
                          .c_str());
  return 0;
}

int cmd_decimal(const CommonOptions& common, int precision, double q) {
  const auto input = parse_input(read_stream(common.input_path));
  // Decimal strings keep the exact integer path; bare numbers cannot.
  const auto result = input.all_strings
                          ? optround::decimal_round(input.tokens, precision, q)
                          : optround::decimal_round(input.numbers, precision, q);
  const auto strings = result.to_strings();
  const auto grid_values = result.to_doubles();
  const double lq = [&] {
    double sum = 0.0;
    for (std::size_t i = 0; i < grid_values.size(); ++i) {
      sum += std::pow(std::fabs(input.numbers[i] - grid_values[i]), q);
    }
    return std::pow(sum, 1.0 / q);
  }();

  if (common.pretty) {
    std::printf("precision   %d\n", result.precision);
    std::printf("sum         %s\n",
                optround::format_scaled_decimal(result.scaled_sum(), result.precision).c_str());
    std::printf("%8s  %-22s %s\n", "index", "value", "rounded");
    for (std::size_t i = 0; i < strings.size(); ++i) {
      std::printf("%8zu  %-22.17g %s\n", i, input.numbers[i], strings[i].c_str());
    }
    return 0;
  }

  std::printf("%s\n",
              jfields({
                  {"values", jarray(strings, [](const std::string& s) { return jstr(s); })},
                  {"precision", jnum(static_cast<std::int64_t>(result.precision))},
                  {"sum", jstr(optround::format_scaled_decimal(result.scaled_sum(),
                                                               result.precision))},
                  {"lq_error", jnum(lq)},
              })
                  .c_str());
  return 0;
}

int cmd_apportion(const CommonOptions& common, std::int64_t seats) {
  const auto input = parse_input(read_stream(common.input_path));
  const auto result = optround::apportion({.votes = input.numbers, .seats = seats});

  if (common.pretty) {
    std::printf("%8s  %-14s %-22s %s\n", "party", "votes", "quota", "seats");
    for (std::size_t i = 0; i < input.numbers.size(); ++i) {
      std::printf("%8zu  %-14.10g %-22.17g %" PRId64 "\n", i, input.numbers[i],
                  result.quotas[i], result.seats[i]);
    }
    std::printf("total seats %" PRId64 "\n", seats);
    return 0;
  }

  std::printf("%s\n", jfields({
                          {"quotas", jarray(result.quotas, [](double v) { return jnum(v); })},
                          {"remainders",
                           jarray(result.remainders, [](double v) { return jnum(v); })},
                          {"seats", jarray(result.seats.values())},
                          {"total", jnum(seats)},
                      })
                          .c_str());
  return 0;
}

int cmd_compare(const CommonOptions& common, std::uint64_t trials, std::uint64_t seed,
                double threshold) {
  const auto input = parse_input(read_stream(common.input_path));
  const optround::RoundingProblem problem(input.numbers);
  const auto optimal = optround::oric_round(problem);
  const auto fractional = optround::fractional_round(problem, threshold);
  const auto gap_threshold = optround::feasible_threshold(problem);
  const auto mc = optround::monte_carlo_report(problem, trials, seed);

  std::size_t fractional_components = 0;
  for (const double v : problem.values()) fractional_components += (v != std::floor(v));
  std::optional<optround::ExactDistribution> exact;
  if (fractional_components <= 20) exact = optround::exact_distribution(problem, optimal);

  const auto sign_str = [](int s) { return std::string(s < 0 ? "-" : (s > 0 ? "+" : "0")); };

  if (common.pretty) {
    std::printf("optimal allocation: %s\n", jarray(optimal.values()).c_str());
    std::printf("fractional(t=%.17g): %s deviation %" PRId64 "\n", threshold,
                jarray(fractional.allocation).c_str(), fractional.sum_deviation);
    if (gap_threshold) {
      std::printf("feasible threshold: %.17g\n", *gap_threshold);
    } else {
      std::printf("feasible threshold: none (tied fractional parts straddle the cut)\n");
    }
    if (exact) {
      std::printf("exact: feasibility %.6f optimality %.6f conditional-non-opt %.6f\n",
                  exact->feasibility_probability, exact->optimality_probability,
                  exact->conditional_non_optimality);
      std::printf("       wrong-up prob %.6f expected wrong ups %.6f\n",
                  exact->wrong_up_probability, exact->expected_wrong_ups);
    }
    std::printf("monte carlo (%" PRIu64 " trials, seed %" PRIu64
                "): feasibility %.6f optimality %.6f\n",
                trials, seed, mc.feasibility_rate, mc.optimality_rate);
    std::printf("bias signs: ");
    for (const int s : mc.bias_signs) std::printf("%s", sign_str(s).c_str());
    std::printf("\n");
    return 0;
  }

  const std::string fractional_json = jfields({
      {"threshold", jnum(threshold)},
      {"allocation", jarray(fractional.allocation, [](std::int64_t v) { return jnum(v); })},
      {"sum_deviation", jnum(fractional.sum_deviation)},
      {"below_count", jnum(static_cast<std::int64_t>(fractional.below_count))},
  });
  std::string exact_json = "null";
  if (exact) {
    exact_json = jfields({
        {"feasibility_probability", jnum(exact->feasibility_probability)},
        {"optimality_probability", jnum(exact->optimality_probability)},
        {"conditional_non_optimality", jnum(exact->conditional_non_optimality)},
        {"wrong_up_probability", jnum(exact->wrong_up_probability)},
        {"expected_wrong_ups", jnum(exact->expected_wrong_ups)},
        {"exact_mean", jarray(exact->exact_mean, [](double v) { return jnum(v); })},
    });
  }
  const std::string mc_json = jfields({
      {"trials", jnum(mc.trials)},
      {"seed", jnum(mc.seed)},
      {"feasibility_rate", jnum(mc.feasibility_rate)},
      {"optimality_rate", jnum(mc.optimality_rate)},
      {"empirical_mean", jarray(mc.empirical_mean, [](double v) { return jnum(v); })},
      {"exact_mean", jarray(mc.exact_mean, [](double v) { return jnum(v); })},
      {"bias_signs", jarray(mc.bias_signs, [&](int s) { return jstr(sign_str(s)); })},
  });
  std::printf("%s\n", jfields({
                          {"optimal", jarray(optimal.values())},
                          {"target", jnum(problem.target())},
                          {"fractional", fractional_json},
                          {"feasible_threshold", jopt(gap_threshold)},
                          {"exact", exact_json},
                          {"monte_carlo", mc_json},
                      })
                          .c_str());
  return 0;
}

int cmd_oracle(const CommonOptions& common, double q, std::optional<std::int64_t> target_flag) {
  const auto input = parse_input(read_stream(common.input_path));
  std::int64_t target = 0;
  if (target_flag) {
    target = *target_flag;
  } else {
    target = optround::RoundingProblem(input.numbers).target();
  }
  const auto result = optround::brute_force_optima(input.numbers, target, q);

  if (common.pretty) {
    std::printf("target     %" PRId64 "\n", target);
    std::printf("evaluated  %zu\n", result.evaluated);
    std::printf("min L%.3g  %.17g\n", q, result.min_value);
    for (const auto& argmin : result.argmins) {
      std::printf("argmin     %s\n", jarray(argmin.values()).c_str());
    }
    return 0;
  }

  std::printf("%s\n",
              jfields({
                  {"q", jnum(q)},
                  {"target", jnum(target)},
                  {"min_value", jnum(result.min_value)},
                  {"evaluated", jnum(static_cast<std::int64_t>(result.evaluated))},
                  {"argmins", jarray(result.argmins,
                                     [](const optround::IntegerAllocation& a) {
                                       return jarray(a.values());
                                     })},
              })
                  .c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-preserving rounding toolkit"};
  app.require_subcommand(1);

  CommonOptions common;
  double q = 2.0;
  double tolerance = optround::kDefaultSnapTolerance;
  std::optional<std::int64_t> target;
  int precision = 2;
  std::int64_t seats = 1;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  double threshold = 0.5;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("input", common.input_path,
                    "input file (CSV or JSON array), '-' for stdin");
    cmd->add_flag("--pretty", common.pretty, "human-readable table instead of JSON");
  };

  auto* round = app.add_subcommand("round", "round to integers, preserving the sum");
  add_common(round);
  round->add_option("--q", q, "norm exponent for the reported error");
  round->add_option("--tolerance", tolerance, "integer snapping tolerance");
  round->add_option("--target", target, "explicit integer target for the sum");

  auto* decimal = app.add_subcommand("decimal", "round to a fixed number of decimals");
  add_common(decimal);
  decimal->add_option("--precision", precision, "decimal digits to keep")->required();
  decimal->add_option("--q", q, "norm exponent");

  auto* apportion = app.add_subcommand("apportion", "largest-remainder seat allocation");
  add_common(apportion);
  apportion->add_option("--seats", seats, "total seats to allocate")->required();

  auto* compare = app.add_subcommand("compare", "baseline rounding methods and their bias");
  add_common(compare);
  compare->add_option("--trials", trials, "Monte Carlo trial count");
  compare->add_option("--seed", seed, "Monte Carlo seed");
  compare->add_option("--threshold", threshold, "fractional rounding threshold");

  auto* oracle = app.add_subcommand("oracle", "exhaustive search over the floor/ceil box");
  add_common(oracle);
  oracle->add_option("--q", q, "norm exponent");
  oracle->add_option("--target", target, "explicit integer target for the sum");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (round->parsed()) return cmd_round(common, q, tolerance, target);
    if (decimal->parsed()) return cmd_decimal(common, precision, q);
    if (apportion->parsed()) return cmd_apportion(common, seats);
    if (compare->parsed()) return cmd_compare(common, trials, seed, threshold);
    if (oracle->parsed()) return cmd_oracle(common, q, target);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == ErrorCode::InfeasibleTarget ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
