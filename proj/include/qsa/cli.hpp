#pragma once

// Command-line front end. Exit status: 0 success, 1 computation failure, 2 usage error.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsa/asymptotics.hpp"
#include "qsa/closed_form.hpp"
#include "qsa/distribution.hpp"
#include "qsa/exact_pgf.hpp"
#include "qsa/moments.hpp"
#include "qsa/serialize.hpp"
#include "qsa/simulator.hpp"

namespace qsa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

struct Common {
  std::string out_path;
  std::string format;
};

/// "A..B" or a single integer "A".
inline Range parse_order_range(const std::string& text) {
  if (text.find("..") != std::string::npos) return Range::parse(text);
  std::size_t used = 0;
  const unsigned long v = std::stoul(text, &used);
  if (used != text.size()) throw std::invalid_argument("expected an integer or A..B: '" + text + "'");
  return Range{v, v};
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact analysis of the Quicksort comparison count", "qsa"};
  app.require_subcommand(1);

  std::size_t nmax = 130;
  unsigned order_m = 10;
  unsigned precision = 50;
  std::size_t surrogate = 130;

  std::function<void(std::ostream&)> action;
  detail::Common common;

  std::map<const CLI::App*, std::string> default_format;
  auto add_out = [&](CLI::App* sub, const std::string& formats, const std::string& fallback) {
    default_format[sub] = fallback;
    sub->add_option("--out", common.out_path, "Write output to FILE instead of stdout");
    if (formats.find('|') != std::string::npos) {
      sub->add_option("--format", common.format, "Output format (" + formats + ")")
          ->check(CLI::IsMember(std::vector<std::string>{"json", "csv"}));
    }
  };
  auto add_nmax = [&](CLI::App* sub) {
    sub->add_option("--nmax", nmax, "Largest n the exact table may build")->envname("QSA_NMAX")->check(CLI::Range(0, 100000));
  };

  // pgf
  std::size_t n = 0;
  auto* pgf_cmd = app.add_subcommand("pgf", "Exact distribution of X_n");
  pgf_cmd->add_option("--n", n, "List length")->required();
  add_nmax(pgf_cmd);
  add_out(pgf_cmd, "json|csv", "json");
  pgf_cmd->callback([&] {
    action = [&](std::ostream& os) {
      PgfTable table(PgfOptions{nmax, true});
      if (n > nmax) throw std::invalid_argument("--n exceeds --nmax (" + std::to_string(nmax) + "); raise --nmax");
      const DistPoly& g = table.pgf(n);
      if (common.format == "csv") write_distribution_csv(os, g);
      else os << distpoly_json(g).dump() << '\n';
    };
  });

  // moment
  unsigned r = 1;
  bool central = false;
  std::string method = "exact";
  auto* moment_cmd = app.add_subcommand("moment", "One moment of X_n");
  moment_cmd->add_option("--n", n, "List length")->required();
  moment_cmd->add_option("--r", r, "Moment order")->required();
  moment_cmd->add_flag("--central", central, "Moment about the mean");
  moment_cmd->add_option("--method", method, "exact (from the distribution) or series (truncated factorial series)")
      ->check(CLI::IsMember(std::vector<std::string>{"exact", "series"}));
  add_nmax(moment_cmd);
  add_out(moment_cmd, "json|csv", "json");
  moment_cmd->callback([&] {
    action = [&](std::ostream& os) {
      if (central && r < 1) throw std::invalid_argument("--r must be at least 1 for central moments");
      Rational value;
      if (method == "exact") {
        if (n > nmax) throw std::invalid_argument("--n exceeds --nmax (" + std::to_string(nmax) + "); raise --nmax");
        PgfTable table(PgfOptions{nmax, true});
        const DistPoly& g = table.pgf(n);
        value = central ? central_moment(g, r) : raw_moment(g, r);
      } else {
        const auto series = factorial_series(n, std::max(r, 1U));
        value = central ? central_moment(series[n], r) : moments_from_factorial(series[n], r);
      }
      if (common.format == "csv") {
        os << n << ',' << r << ',' << value.numerator().get_str() << ',' << value.denominator().get_str() << '\n';
      } else {
        os << json{{"n", n}, {"r", r}, {"central", central}, {"value", value}}.dump() << '\n';
      }
    };
  });

  // moments-table
  unsigned max_r = 6;
  auto* table_cmd = app.add_subcommand("moments-table", "Mean and central moments 2..r for n = 0..nmax");
  add_nmax(table_cmd);
  table_cmd->add_option("--r", max_r, "Highest moment order")->check(CLI::PositiveNumber);
  table_cmd->add_option("--M", order_m, "Truncation order of the factorial series")->envname("QSA_M")->check(CLI::PositiveNumber);
  add_out(table_cmd, "json|csv", "csv");
  table_cmd->callback([&] {
    action = [&](std::ostream& os) {
      if (max_r > order_m) throw std::invalid_argument("--r exceeds the truncation order --M");
      const auto tables = moment_tables(nmax, max_r);
      if (common.format == "csv") write_moments_csv(os, tables);
      else os << moments_json(tables).dump() << '\n';
    };
  });

  // guess
  std::string train_text, test_text;
  std::size_t guess_nmax = 0;
  std::size_t slack = 5;
  auto* guess_cmd = app.add_subcommand("guess", "Discover a closed form for the mean (r = 1) or central moment r");
  guess_cmd->add_option("--r", r, "Moment order")->required()->check(CLI::PositiveNumber);
  guess_cmd->add_option("--nmax", guess_nmax, "Largest n of generated data (default: whatever the ranges need)");
  guess_cmd->add_option("--train", train_text, "Training range A..B");
  guess_cmd->add_option("--test", test_text, "Testing range C..D");
  guess_cmd->add_option("--slack", slack, "Extra equations beyond the unknowns");
  add_out(guess_cmd, "json", "json");
  guess_cmd->callback([&] {
    action = [&](std::ostream& os) {
      GuessOptions options;
      options.fit.slack = slack;
      if (!train_text.empty()) options.train = Range::parse(train_text);
      if (!test_text.empty()) options.test = Range::parse(test_text);
      std::size_t need = required_n_max(r, options);
      if (options.train) need = std::max(need, options.train->last);
      if (options.test) need = std::max(need, options.test->last);
      const std::size_t data_max = guess_nmax ? guess_nmax : need;
      const FitReport report = guess_moment(r, data_max, options);
      json j = report;
      j["r"] = r;
      os << j.dump() << '\n';
    };
  });

  // limits
  std::string r_text = "3..8";
  auto* limits_cmd = app.add_subcommand("limits", "Limits of the scaled central moments m_r / m_2^(r/2)");
  limits_cmd->add_option("--r", r_text, "Order or range of orders, e.g. 3..8");
  limits_cmd->add_option("--precision", precision, "Decimal digits")->envname("QSA_PRECISION");
  add_out(limits_cmd, "json", "json");
  limits_cmd->callback([&] {
    action = [&](std::ostream& os) {
      const Range orders = detail::parse_order_range(r_text);
      if (orders.first < 2) throw std::invalid_argument("--r must be at least 2");
      if (precision < kMinAsymptoticPrecision) {
        throw std::invalid_argument("--precision must be at least " + std::to_string(kMinAsymptoticPrecision));
      }
      const unsigned top = static_cast<unsigned>(orders.last);
      const auto tables = moment_tables(required_n_max(top), top);
      const HarmonicExpr second = guess_moment(2, tables[1].values).expr;
      for (std::size_t order = orders.first; order <= orders.last; ++order) {
        const auto ord = static_cast<unsigned>(order);
        const HarmonicExpr expr = ord == 2 ? second : guess_moment(ord, tables[ord - 1].values).expr;
        const AsymptoticValue v = scaled_moment_limit(ord, expr, second, precision);
        os << json{{"r", ord}, {"value", v.value.str(precision)}, {"stable_digits", v.stability}}.dump() << '\n';
      }
    };
  });

  // density
  std::string bin_text = "0.1";
  auto* density_cmd = app.add_subcommand("density", "Histogram of Z_n = (X_n - c_n)/sqrt(m_2(n))");
  density_cmd->add_option("--n", n, "List length")->required();
  density_cmd->add_option("--bin", bin_text, "Bin width in z");
  add_nmax(density_cmd);
  add_out(density_cmd, "csv", "csv");
  density_cmd->callback([&] {
    action = [&](std::ostream& os) {
      if (n > nmax) throw std::invalid_argument("--n exceeds --nmax (" + std::to_string(nmax) + "); raise --nmax");
      PgfTable table(PgfOptions{nmax, true});
      write_density_csv(os, export_density(table, n, HighReal::parse(bin_text, kMinDigits)));
    };
  });

  // tail
  std::string threshold_text;
  auto* tail_cmd = app.add_subcommand("tail", "Pr(X_n > x) using a smaller exact distribution as surrogate");
  tail_cmd->add_option("--n", n, "List length")->required();
  tail_cmd->add_option("--x", threshold_text, "Threshold (integer or p/q)")->required();
  tail_cmd->add_option("--surrogate", surrogate, "Size of the exact surrogate distribution")->envname("QSA_SURROGATE");
  add_out(tail_cmd, "json", "json");
  tail_cmd->callback([&] {
    action = [&](std::ostream& os) {
      PgfTable table(PgfOptions{std::max(nmax, surrogate), true});
      const Rational x = Rational::parse(threshold_text);
      const TailResult t = tail_probability(table, n, x, surrogate);
      os << json{{"n", n},
                 {"x", threshold_text},
                 {"surrogate", surrogate},
                 {"probability", t.probability.str(20)},
                 {"saturated", t.saturated}}
                .dump()
         << '\n';
    };
  });

  // simulate
  std::size_t trials = 1000;
  std::uint64_t seed = 42;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo comparison counts on random permutations");
  sim_cmd->add_option("--n", n, "List length")->required();
  sim_cmd->add_option("--trials", trials, "Number of permutations")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", seed, "RNG seed");
  add_out(sim_cmd, "json", "json");
  sim_cmd->callback([&] {
    action = [&](std::ostream& os) {
      json j = monte_carlo(SimConfig{n, trials, seed});
      j["n"] = n;
      j["seed"] = seed;
      os << j.dump() << '\n';
    };
  });

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact distribution by exhaustive pivot enumeration (n <= 12)");
  oracle_cmd->add_option("--n", n, "List length")->required();
  add_out(oracle_cmd, "json|csv", "csv");
  oracle_cmd->callback([&] {
    action = [&](std::ostream& os) {
      const auto dist = exhaustive_distribution(n);
      if (common.format == "csv") {
        write_distribution_csv(os, dist);
      } else {
        json coeffs = json::array();
        for (const auto& [k, p] : dist) coeffs.push_back(json::array({k, p.numerator().get_str(), p.denominator().get_str()}));
        os << json{{"n", n}, {"coeffs", coeffs}}.dump() << '\n';
      }
    };
  });

  // selection-count
  auto* sel_cmd = app.add_subcommand("selection-count", "Comparisons made by selection sort on a random permutation");
  sel_cmd->add_option("--n", n, "List length")->required();
  sel_cmd->add_option("--seed", seed, "RNG seed");
  add_out(sel_cmd, "json", "json");
  sel_cmd->callback([&] {
    action = [&](std::ostream& os) {
      std::vector<int> keys(n);
      std::iota(keys.begin(), keys.end(), 0);
      std::mt19937_64 rng(seed);
      std::shuffle(keys.begin(), keys.end(), rng);
      const auto result = selection_sort_count(std::move(keys));
      os << json{{"n", n}, {"seed", seed}, {"comparisons", result.comparisons}}.dump() << '\n';
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "qsa: " << e.what() << '\n';
    return kExitUsage;
  }
  if (common.format.empty()) common.format = default_format.at(app.get_subcommands().front());

  try {
    if (common.out_path.empty()) {
      action(out);
    } else {
      std::ofstream file(common.out_path);
      if (!file) throw std::invalid_argument("cannot open --out file '" + common.out_path + "'");
      action(file);
    }
  } catch (const std::invalid_argument& e) {
    err << "qsa: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "qsa: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "qsa: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("qsa");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace qsa::cli
