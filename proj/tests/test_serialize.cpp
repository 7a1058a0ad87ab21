#include <sstream>

#include <gtest/gtest.h>

#include "qsa/serialize.hpp"

using namespace qsa;

TEST(Json, RationalRoundTrip) {
  const Rational r(-3, 4);
  const json j = r;
  EXPECT_EQ(j.dump(), R"({"den":"4","num":"-3"})");
  EXPECT_EQ(j.get<Rational>(), r);
}

TEST(Json, HighRealRoundTrip) {
  const HighReal x = zeta(3, 50);
  const json j = x;
  EXPECT_EQ(j.at("precision").get<unsigned>(), 50u);
  EXPECT_GE(agreeing_digits(j.get<HighReal>(), x), 48u);
}

TEST(Json, ExpressionRoundTrip) {
  const HarmonicExpr e = known::variance();
  const json j = e;
  EXPECT_EQ(j.get<HarmonicExpr>(), e);
  EXPECT_EQ(j.size(), e.size());
}

TEST(Json, Distribution) {
  PgfTable table;
  const json j = distpoly_json(table.pgf(3));
  EXPECT_EQ(j.dump(), R"({"coeffs":[[2,"1","3"],[3,"2","3"]],"n":3})");
}

TEST(Csv, DistributionRows) {
  PgfTable table;
  std::ostringstream os;
  write_distribution_csv(os, table.pgf(4));
  EXPECT_EQ(os.str(), "4,1,2\n5,1,6\n6,1,3\n");
}

TEST(Csv, MomentRows) {
  std::ostringstream os;
  const auto tables = moment_tables(3, 2);
  write_moments_csv(os, tables);
  EXPECT_EQ(os.str(), "0,1,0,1\n0,2,0,1\n1,1,0,1\n1,2,0,1\n2,1,1,1\n2,2,0,1\n3,1,8,3\n3,2,2,9\n");
}

TEST(Csv, DensityRows) {
  PgfTable table;
  std::ostringstream os;
  write_density_csv(os, export_density(table, 3, HighReal::parse("10", 50)), 5);
  EXPECT_EQ(os.str().substr(0, 12), "-1.4142e+00,");
  EXPECT_NE(os.str().find(",1.0000e+00\n"), std::string::npos);
}
