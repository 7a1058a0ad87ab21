#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "qsa/closed_form.hpp"
#include "qsa/exact_pgf.hpp"
#include "qsa/simulator.hpp"

using namespace qsa;

TEST(Quicksort, SortsSampleList) {
  std::mt19937_64 rng(1);
  const std::vector<int> keys = {3, 1, 4, 1, 5, 9, 2, 3};
  for (int i = 0; i < 200; ++i) {
    const auto res = quicksort_count(keys, rng);
    EXPECT_EQ(res.sorted, (std::vector<int>{1, 1, 2, 3, 3, 4, 5, 9}));
    EXPECT_GE(res.comparisons, 7u);
    EXPECT_LE(res.comparisons, 28u);
  }
}

TEST(Quicksort, BaseCases) {
  std::mt19937_64 rng(1);
  EXPECT_EQ(quicksort_count(std::vector<int>{}, rng).comparisons, 0u);
  EXPECT_EQ(quicksort_count(std::vector<int>{42}, rng).comparisons, 0u);
  EXPECT_EQ(quicksort_count(std::vector<int>{2, 1}, rng).comparisons, 1u);
}

TEST(Quicksort, AllEqualKeysGoRight) {
  // every key lands right of the pivot, so each pass peels off one element
  std::mt19937_64 rng(3);
  const std::vector<int> keys(10, 7);
  EXPECT_EQ(quicksort_count(keys, rng).comparisons, 45u);
}

TEST(Quicksort, RandomInputsStayWithinBounds) {
  std::mt19937_64 rng(11);
  for (std::size_t n = 2; n <= 60; ++n) {
    std::vector<double> keys(n);
    for (auto& k : keys) k = std::uniform_real_distribution<double>(0, 1)(rng);
    const auto res = quicksort_count(keys, rng);
    EXPECT_TRUE(std::is_sorted(res.sorted.begin(), res.sorted.end()));
    EXPECT_GE(res.comparisons, n - 1);
    EXPECT_LE(res.comparisons, n * (n - 1) / 2);
  }
}

TEST(SelectionSort, AlwaysQuadratic) {
  std::mt19937_64 rng(5);
  for (std::size_t n = 0; n <= 50; ++n) {
    std::vector<int> keys(n);
    for (auto& k : keys) k = std::uniform_int_distribution<int>(0, 9)(rng);
    const auto res = selection_sort_count(keys);
    EXPECT_EQ(res.comparisons, n * (n > 0 ? n - 1 : 0) / 2);
    EXPECT_TRUE(std::is_sorted(res.sorted.begin(), res.sorted.end()));
  }
}

TEST(Exhaustive, SmallCases) {
  EXPECT_EQ(exhaustive_distribution(2), (std::map<std::uint64_t, Rational>{{1, Rational(1)}}));
  EXPECT_EQ(exhaustive_distribution(3), (std::map<std::uint64_t, Rational>{{2, Rational(1, 3)}, {3, Rational(2, 3)}}));
  EXPECT_EQ(exhaustive_distribution(4),
            (std::map<std::uint64_t, Rational>{{4, Rational(1, 2)}, {5, Rational(1, 6)}, {6, Rational(1, 3)}}));
  EXPECT_THROW(exhaustive_distribution(13), std::invalid_argument);
}

TEST(Exhaustive, AgreesWithGeneratingFunction) {
  PgfTable table(PgfOptions{10, true});
  for (std::size_t n = 0; n <= 10; ++n) {
    const auto oracle = exhaustive_distribution(n);
    const DistPoly& g = table.pgf(n);
    std::map<std::uint64_t, Rational> from_pgf;
    for (std::uint64_t k = g.min_k(); k <= g.max_k(); ++k) {
      if (Rational p = g.probability(k); !p.is_zero()) from_pgf.emplace(k, p);
    }
    EXPECT_EQ(oracle, from_pgf) << "n = " << n;
  }
}

TEST(Exhaustive, BoundsAttained) {
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto d = exhaustive_distribution(n);
    EXPECT_EQ(d.rbegin()->first, n * (n - 1) / 2);
    EXPECT_GE(d.begin()->first, n - 1);
  }
}

TEST(MonteCarlo, SeedDeterminism) {
  const SimConfig cfg{50, 500, 99};
  EXPECT_EQ(monte_carlo(cfg), monte_carlo(cfg));
  EXPECT_NE(monte_carlo(cfg).mean, monte_carlo(SimConfig{50, 500, 100}).mean);
  EXPECT_THROW(monte_carlo(SimConfig{5, 0, 1}), std::invalid_argument);
}

TEST(MonteCarlo, TwoElementsAreDeterministic) {
  const EmpiricalStats s = monte_carlo(SimConfig{2, 100, 1});
  EXPECT_EQ(s.mean, 1.0);
  EXPECT_EQ(s.variance, 0.0);
  EXPECT_EQ(s.min, 1u);
  EXPECT_EQ(s.max, 1u);
}

TEST(MonteCarlo, MatchesExactMomentsAtOneThousand) {
  const std::size_t n = 1000;
  const EmpiricalStats s = monte_carlo(SimConfig{n, 10000, 2024});
  const double mean = evaluate(known::mean(), n).to_double();
  const double var = evaluate(known::variance(), n).to_double();
  EXPECT_LT(std::abs(s.mean - mean), 4 * std::sqrt(var / 10000.0));
  EXPECT_LT(std::abs(s.variance / var - 1), 0.1);
  EXPECT_GT(s.skewness, 0);
  EXPECT_GE(s.min, n - 1);
  EXPECT_LE(s.max, n * (n - 1) / 2);
}
