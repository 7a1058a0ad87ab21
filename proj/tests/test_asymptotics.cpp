#include <gtest/gtest.h>

#include "qsa/asymptotics.hpp"
#include "qsa/closed_form.hpp"
#include "qsa/constants.hpp"
#include "qsa/moments.hpp"
#include "transcribed_formulas.hpp"

using namespace qsa;
using qsa::testing::moment_formula;

namespace {

constexpr unsigned kDigits = 60;

HighReal num(const char* text) { return HighReal::parse(text, kDigits); }

bool within(const HighReal& a, const HighReal& b, const char* tol) { return abs(a - b) <= num(tol); }

// Coefficient of n^d with every H_m (m >= 2) replaced by zeta(m); H_1 must not appear.
HighReal zeta_substituted_top(const HarmonicExpr& e, unsigned d) {
  HighReal acc(kDigits);
  for (const auto& [m, c] : e.terms()) {
    if (m.n_power() != d) continue;
    EXPECT_EQ(m.h_power(1), 0u) << "divergent top term " << m.str();
    HighReal v(c, kDigits);
    for (unsigned order = 2; order <= m.max_order(); ++order) {
      if (const unsigned b = m.h_power(order)) v *= pow(zeta(order, kDigits), static_cast<long>(b));
    }
    acc += v;
  }
  return acc;
}

const std::vector<HarmonicExpr>& guessed() {
  static const std::vector<HarmonicExpr> exprs = [] {
    const auto tables = moment_tables(required_n_max(8), 8);
    std::vector<HarmonicExpr> out;
    for (unsigned r = 1; r <= 8; ++r) out.push_back(guess_moment(r, tables[r - 1].values).expr);
    return out;
  }();
  return exprs;
}

}  // namespace

TEST(Asymptotics, VarianceLeadingCoefficient) {
  const AsymptoticValue v = leading_coefficient(moment_formula(2), 50);
  const HighReal p = pi(kDigits);
  EXPECT_TRUE(within(v.value, HighReal(7L, kDigits) - HighReal(2L, kDigits) * p * p / HighReal(3L, kDigits), "1e-40"));
  EXPECT_EQ(v.value.fixed(5), "0.42026");
  EXPECT_GE(v.stability, 12u);
}

TEST(Asymptotics, ThirdMomentLeadingCoefficient) {
  const AsymptoticValue v = leading_coefficient(moment_formula(3), 50);
  EXPECT_TRUE(within(v.value, HighReal(16L, kDigits) * zeta(3, kDigits) - HighReal(19L, kDigits), "1e-40"));
}

TEST(Asymptotics, FourthMomentLeadingCoefficient) {
  const AsymptoticValue v = leading_coefficient(moment_formula(4), 50);
  EXPECT_TRUE(within(v.value, num("0.73794549"), "1e-8")) << v.value.str(20);
  const HighReal p = pi(kDigits);
  const HighReal closed = HighReal(Rational(2260, 9), kDigits) - HighReal(28L, kDigits) * p * p +
                          HighReal(Rational(4, 15), kDigits) * pow(p, 4L);
  EXPECT_GE(agreeing_digits(v.value, closed), 20u);
}

TEST(Asymptotics, ScaledLimitsMatchZetaSubstitution) {
  const auto& e = guessed();
  const HighReal c2 = zeta_substituted_top(e[1], 2);
  for (unsigned r = 2; r <= 8; ++r) {
    const AsymptoticValue v = scaled_moment_limit(r, e[r - 1], e[1], 50);
    const HighReal oracle = zeta_substituted_top(e[r - 1], r) / pow(sqrt(c2), static_cast<long>(r));
    EXPECT_GE(agreeing_digits(v.value, oracle), 25u) << "r = " << r;
  }
}

TEST(Asymptotics, ScaledLimitsMatchReferenceDecimals) {
  const auto& e = guessed();
  const std::vector<const char*> reference = {"0.85488186713258853660", "4.1781156382698542397",
                                              "10.646163374673878503", "44.427077708169777614",
                                              "179.72191973561786840"};
  for (unsigned r = 3; r <= 7; ++r) {
    const AsymptoticValue v = scaled_moment_limit(r, e[r - 1], e[1], 50);
    EXPECT_TRUE(within(v.value, num(reference[r - 3]), "1e-12")) << "r = " << r << ": " << v.value.str(25);
  }
}

TEST(Asymptotics, SkewnessLimitClosedForm) {
  const AsymptoticValue v = scaled_moment_limit(3, moment_formula(3), moment_formula(2), 50);
  const HighReal p = pi(kDigits);
  const HighReal base = HighReal(7L, kDigits) - HighReal(2L, kDigits) * p * p / HighReal(3L, kDigits);
  const HighReal closed = (HighReal(16L, kDigits) * zeta(3, kDigits) - HighReal(19L, kDigits)) / (base * sqrt(base));
  EXPECT_GE(agreeing_digits(v.value, closed), 40u);
}

TEST(Asymptotics, DegenerateSecondOrderIsOne) {
  const AsymptoticValue v = scaled_moment_limit(2, moment_formula(2), moment_formula(2), 50);
  EXPECT_TRUE(within(v.value, HighReal(1L, kDigits), "1e-45"));
  EXPECT_THROW(scaled_moment_limit(1, moment_formula(1), moment_formula(2), 50), std::invalid_argument);
}

TEST(Asymptotics, PrecisionFloor) {
  EXPECT_THROW(leading_coefficient(moment_formula(2), 10), std::invalid_argument);
}

TEST(Asymptotics, MeanGrowthConstant) {
  const HighReal v = mean_asymptotic_check(50);
  EXPECT_EQ(v.fixed(8), "2.88539008");
}

TEST(Asymptotics, CoefficientOfVariationShrinks) {
  const HighReal a = coefficient_of_variation(mpz_class("1000000"));
  const HighReal b = coefficient_of_variation(mpz_class("1000000000000"));
  EXPECT_LT(a, num("0.05"));
  EXPECT_LT(b, a);
  // roughly sqrt(7 - 2 pi^2 / 3) / (2 ln n)
  const HighReal n6(1000000L, kDigits);
  const HighReal approx = sqrt(leading_coefficient(moment_formula(2), 50).value) / (HighReal(2L, kDigits) * log(n6));
  EXPECT_LT(abs(a / approx - HighReal(1L, kDigits)), num("0.2"));
}

TEST(Asymptotics, AsymptoticEvaluationTracksExact) {
  const std::size_t n = 10000;
  for (unsigned r = 1; r <= 4; ++r) {
    const HighReal exact(evaluate(moment_formula(r), n), kDigits);
    const HighReal approx = evaluate_asymptotic(moment_formula(r), mpz_class(static_cast<unsigned long>(n)), kDigits);
    EXPECT_GE(agreeing_digits(approx, exact), 20u) << "r = " << r;
  }
}
