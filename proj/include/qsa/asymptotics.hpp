#pragma once

// Numerical limits of closed-form moments: harmonic numbers are replaced by
// their Euler-Maclaurin expansions and the expression is evaluated at several
// very large n. A value is reported only when those evaluations agree.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qsa/closed_form.hpp"
#include "qsa/constants.hpp"
#include "qsa/harmonic.hpp"
#include "qsa/high_real.hpp"

namespace qsa {

struct AsymptoticValue {
  HighReal value;
  std::vector<mpz_class> n_used;
  unsigned stability = 0;  // leading digits shared by all evaluations
};

class StabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AsymptoticOptions {
  // Corrections decay like (ln n)^j / n, so the points sit far out.
  std::vector<mpz_class> points = {mpz_class("1" + std::string(30, '0')), mpz_class("1" + std::string(40, '0')),
                                   mpz_class("1" + std::string(50, '0'))};
  unsigned required_digits = 12;
  unsigned guard_digits = 30;
  unsigned em_terms = 4;
};

inline constexpr unsigned kMinAsymptoticPrecision = 30;

inline unsigned working_digits(unsigned precision, const AsymptoticOptions& options) {
  if (precision < kMinAsymptoticPrecision) {
    throw std::invalid_argument("precision must be at least " + std::to_string(kMinAsymptoticPrecision) + " digits");
  }
  return std::max(precision + options.guard_digits, kMinDigits);
}

/// expr(n) with H_m(n) replaced by harmonic_asymptotic(m, n).
inline HighReal evaluate_asymptotic(const HarmonicExpr& expr, const mpz_class& n, unsigned digits,
                                    unsigned em_terms = 4) {
  std::map<unsigned, HighReal> h;
  for (unsigned m = 1; m <= expr.max_order(); ++m) h.emplace(m, harmonic_asymptotic(static_cast<int>(m), n, em_terms, digits));
  const HighReal x(n, digits);
  HighReal total(digits);
  for (const auto& [mono, coeff] : expr.terms()) {
    HighReal term = HighReal(coeff, digits) * pow(x, static_cast<long>(mono.n_power()));
    for (unsigned m = 1; m <= mono.max_order(); ++m) {
      if (const unsigned b = mono.h_power(m)) term *= pow(h.at(m), static_cast<long>(b));
    }
    total += term;
  }
  return total;
}

namespace detail {

template <typename Eval>
AsymptoticValue stable_limit(const AsymptoticOptions& options, const char* what, Eval&& eval) {
  if (options.points.size() < 2) throw std::invalid_argument("asymptotics: need at least two evaluation points");
  AsymptoticValue out{eval(options.points.back()), options.points, 0};
  unsigned stability = out.value.digits();
  for (std::size_t i = 0; i + 1 < options.points.size(); ++i) {
    stability = std::min(stability, agreeing_digits(eval(options.points[i]), out.value));
  }
  out.stability = stability;
  if (stability < options.required_digits) {
    throw StabilityError(std::string(what) + ": evaluations agree to only " + std::to_string(stability) +
                         " digits (need " + std::to_string(options.required_digits) + ")");
  }
  return out;
}

}  // namespace detail

/// lim m_r(n) / m_2(n)^(r/2).
inline AsymptoticValue scaled_moment_limit(unsigned r, const HarmonicExpr& moment_r, const HarmonicExpr& moment_2,
                                           unsigned precision = 50, const AsymptoticOptions& options = {}) {
  if (r < 2) throw std::invalid_argument("scaled_moment_limit: r must be at least 2");
  const unsigned digits = working_digits(precision, options);
  return detail::stable_limit(options, "scaled_moment_limit", [&](const mpz_class& n) {
    const HighReal num = evaluate_asymptotic(moment_r, n, digits, options.em_terms);
    const HighReal var = evaluate_asymptotic(moment_2, n, digits, options.em_terms);
    HighReal den = pow(var, static_cast<long>(r / 2));
    if (r % 2 == 1) den *= sqrt(var);
    return num / den;
  });
}

/// lim expr(n) / n^d where d is the largest power of n in expr.
inline AsymptoticValue leading_coefficient(const HarmonicExpr& expr, unsigned precision = 50,
                                           const AsymptoticOptions& options = {}) {
  const unsigned digits = working_digits(precision, options);
  const long degree = static_cast<long>(expr.max_n_power());
  return detail::stable_limit(options, "leading_coefficient", [&](const mpz_class& n) {
    return evaluate_asymptotic(expr, n, digits, options.em_terms) / pow(HighReal(n, digits), degree);
  });
}

/// 2 / ln 2, the ratio of the average cost 2 n ln n to the best case n log2 n.
/// Also confirms (c_n - (2 gamma - 4) n) / (n ln n) is within 1e-5 of 2 at n = 10^8.
inline HighReal mean_asymptotic_check(unsigned precision = 50) {
  const unsigned digits = std::max(precision, kMinDigits);
  const mpz_class n("100000000");
  const HighReal x(n, digits);
  const HighReal c = evaluate_asymptotic(known::mean(), n, digits);
  const HighReal linear = (HighReal(2L, digits) * euler_gamma(digits) - HighReal(4L, digits)) * x;
  const HighReal ratio = (c - linear) / (x * log(x));
  if (abs(ratio - HighReal(2L, digits)) > HighReal::parse("1e-5", digits)) {
    throw std::runtime_error("mean_asymptotic_check: c_n / (n ln n) does not approach 2");
  }
  return HighReal(2L, digits) / ln2(digits);
}

/// sqrt(m_2(n)) / c_n with asymptotic harmonic numbers.
inline HighReal coefficient_of_variation(const mpz_class& n, unsigned digits = kMinDigits) {
  return sqrt(evaluate_asymptotic(known::variance(), n, digits)) / evaluate_asymptotic(known::mean(), n, digits);
}

}  // namespace qsa
