#include <gtest/gtest.h>

#include "qsa/closed_form.hpp"
#include "qsa/exact_pgf.hpp"
#include "qsa/moments.hpp"

using namespace qsa;

namespace {

PgfTable& shared_table() {
  static PgfTable table(PgfOptions{60, true});
  return table;
}

}  // namespace

TEST(Moments, RawFromDistribution) {
  auto& t = shared_table();
  EXPECT_EQ(raw_moment(t.pgf(3), 1), Rational(8, 3));
  EXPECT_EQ(raw_moment(t.pgf(4), 1), Rational(29, 6));
  EXPECT_EQ(raw_moment(t.pgf(3), 2), Rational(22, 3));
  for (std::size_t n = 0; n <= 20; ++n) EXPECT_EQ(raw_moment(t.pgf(n), 0), Rational(1));
}

TEST(Moments, CentralFromDistribution) {
  auto& t = shared_table();
  EXPECT_EQ(central_moment(t.pgf(2), 2), Rational(0));
  EXPECT_EQ(central_moment(t.pgf(3), 2), Rational(2, 9));
  EXPECT_EQ(central_moment(t.pgf(3), 3), Rational(-2, 27));
  EXPECT_EQ(central_moment(t.pgf(9), 1), Rational(0));
  EXPECT_THROW(central_moment(t.pgf(3), 0), std::invalid_argument);
}

TEST(Moments, TruncatedSeriesSmallCases) {
  const auto series = factorial_series(100, 2);
  EXPECT_EQ(series[2].coeffs, (std::vector<Rational>{Rational(1), Rational(1), Rational(0)}));
  EXPECT_EQ(series[3].coeffs, (std::vector<Rational>{Rational(1), Rational(8, 3), Rational(7, 3)}));
  EXPECT_EQ(series[100].coeffs[1], evaluate(known::mean(), 100));
  EXPECT_EQ(moments_from_factorial(series[3], 1), Rational(8, 3));
  EXPECT_EQ(moments_from_factorial(series[3], 2), Rational(22, 3));
  EXPECT_EQ(central_moment(series[3], 2), Rational(2, 9));
  EXPECT_THROW(moments_from_factorial(series[3], 3), std::out_of_range);
}

TEST(Moments, SeriesAgreesWithExactDistribution) {
  auto& t = shared_table();
  const auto series = factorial_series(60, 10);
  for (std::size_t n = 0; n <= 60; ++n) {
    for (unsigned r = 0; r <= 10; ++r) {
      ASSERT_EQ(moments_from_factorial(series[n], r), raw_moment(t.pgf(n), r)) << "n = " << n << ", r = " << r;
    }
  }
}

TEST(Moments, FactorialMomentsAreFallingPowerSums) {
  auto& t = shared_table();
  const auto series = factorial_series(25, 6);
  for (std::size_t n = 0; n <= 25; ++n) {
    const DistPoly& g = t.pgf(n);
    for (unsigned r = 0; r <= 6; ++r) {
      Rational expected;
      for (std::uint64_t k = g.min_k(); k <= g.max_k(); ++k) {
        mpz_class falling(1);
        for (unsigned i = 0; i < r; ++i) falling *= static_cast<long>(k) - static_cast<long>(i);
        expected += Rational(falling) * g.probability(k);
      }
      ASSERT_EQ(series[n].factorial_moment(r), expected);
    }
  }
}

TEST(Moments, TablesMatchClosedForms) {
  const auto tables = moment_tables(80, 2);
  ASSERT_EQ(tables.size(), 2u);
  EXPECT_FALSE(tables[0].central);
  EXPECT_TRUE(tables[1].central);
  for (std::size_t n = 0; n <= 80; ++n) {
    EXPECT_EQ(tables[0].values.at(n), evaluate(known::mean(), n));
    EXPECT_EQ(tables[1].values.at(n), evaluate(known::variance(), n));
  }
}

TEST(Moments, StirlingRows) {
  const auto& row = StirlingTable::shared().row(5);
  EXPECT_EQ(row, (std::vector<mpz_class>{0, 1, 15, 25, 10, 1}));
}
