#pragma once

// Ground truth for the exact engine: comparison-counting sorts, Monte Carlo
// runs on random permutations, and an exhaustive walk over every pivot choice.
// Nothing here uses the generating-function code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qsa/rational.hpp"

namespace qsa {

template <typename T>
struct SortResult {
  std::vector<T> sorted;
  std::uint64_t comparisons = 0;
};

/// Randomized Quicksort. Keys strictly below the pivot go left, all others right.
template <typename T, typename Rng>
SortResult<T> quicksort_count(std::vector<T> keys, Rng& rng) {
  SortResult<T> out;
  std::vector<std::pair<std::size_t, std::size_t>> pending;  // [lo, hi)
  if (keys.size() > 1) pending.emplace_back(0, keys.size());
  std::vector<T> left, right;
  while (!pending.empty()) {
    const auto [lo, hi] = pending.back();
    pending.pop_back();
    const std::size_t len = hi - lo;
    std::uniform_int_distribution<std::size_t> pick(0, len - 1);
    const std::size_t pivot_index = lo + pick(rng);
    const T pivot = keys[pivot_index];
    left.clear();
    right.clear();
    for (std::size_t j = lo; j < hi; ++j) {
      if (j == pivot_index) continue;
      ++out.comparisons;
      if (keys[j] < pivot) left.push_back(keys[j]);
      else right.push_back(keys[j]);
    }
    std::copy(left.begin(), left.end(), keys.begin() + static_cast<std::ptrdiff_t>(lo));
    const std::size_t mid = lo + left.size();
    keys[mid] = pivot;
    std::copy(right.begin(), right.end(), keys.begin() + static_cast<std::ptrdiff_t>(mid + 1));
    if (left.size() > 1) pending.emplace_back(lo, mid);
    if (right.size() > 1) pending.emplace_back(mid + 1, hi);
  }
  out.sorted = std::move(keys);
  return out;
}

/// Repeatedly extracts the minimum; always n(n-1)/2 comparisons.
template <typename T>
SortResult<T> selection_sort_count(std::vector<T> keys) {
  SortResult<T> out;
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    std::size_t champ = i;
    for (std::size_t j = i + 1; j < keys.size(); ++j) {
      ++out.comparisons;
      if (keys[j] < keys[champ]) champ = j;
    }
    // rotate keeps the remaining keys in their original order
    std::rotate(keys.begin() + static_cast<std::ptrdiff_t>(i), keys.begin() + static_cast<std::ptrdiff_t>(champ),
                keys.begin() + static_cast<std::ptrdiff_t>(champ + 1));
  }
  out.sorted = std::move(keys);
  return out;
}

inline constexpr std::size_t kExhaustiveMaxN = 12;

namespace detail {

// Depth-first walk over execution paths. `weight` is n! times the path probability
// (n! / product of the sublist lengths, always an integer).
inline void walk_pivot_paths(std::vector<std::vector<int>>& pending, std::uint64_t comparisons, std::uint64_t weight,
                             std::map<std::uint64_t, std::uint64_t>& tally) {
  if (pending.empty()) {
    tally[comparisons] += weight;
    return;
  }
  std::vector<int> list = std::move(pending.back());
  pending.pop_back();
  const std::size_t len = list.size();
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<int> lower, upper;
    for (std::size_t j = 0; j < len; ++j) {
      if (j == i) continue;
      if (list[j] < list[i]) lower.push_back(list[j]);
      else upper.push_back(list[j]);
    }
    const std::size_t before = pending.size();
    if (lower.size() > 1) pending.push_back(std::move(lower));
    if (upper.size() > 1) pending.push_back(std::move(upper));
    walk_pivot_paths(pending, comparisons + len - 1, weight / len, tally);
    pending.resize(before);
  }
  pending.push_back(std::move(list));
}

}  // namespace detail

/// Exact distribution of the comparison count, by enumerating every pivot rank
/// at every step. Feasible for n <= 12.
inline std::map<std::uint64_t, Rational> exhaustive_distribution(std::size_t n) {
  if (n > kExhaustiveMaxN) {
    throw std::invalid_argument("exhaustive_distribution: n = " + std::to_string(n) + " exceeds " +
                                std::to_string(kExhaustiveMaxN));
  }
  std::uint64_t total = 1;
  for (std::size_t i = 2; i <= n; ++i) total *= i;
  std::map<std::uint64_t, std::uint64_t> tally;
  std::vector<std::vector<int>> pending;
  if (n > 1) {
    std::vector<int> ranks(n);
    std::iota(ranks.begin(), ranks.end(), 0);
    pending.push_back(std::move(ranks));
  }
  detail::walk_pivot_paths(pending, 0, total, tally);
  std::map<std::uint64_t, Rational> out;
  for (const auto& [count, weight] : tally) {
    out.emplace(count, Rational(mpz_class(static_cast<unsigned long>(weight)), mpz_class(static_cast<unsigned long>(total))));
  }
  return out;
}

struct SimConfig {
  std::size_t n = 0;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
};

struct EmpiricalStats {
  std::size_t trials = 0;
  double mean = 0;
  double variance = 0;  // unbiased sample variance
  double skewness = 0;
  std::uint64_t min = 0;
  std::uint64_t max = 0;

  friend bool operator==(const EmpiricalStats&, const EmpiricalStats&) = default;
};

/// Sorts `trials` uniform random permutations of 0..n-1 and summarizes the counts.
inline EmpiricalStats monte_carlo(const SimConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("monte_carlo: trials must be at least 1");
  std::mt19937_64 rng(cfg.seed);
  std::vector<int> base(cfg.n);
  std::iota(base.begin(), base.end(), 0);

  // Power sums are exact, so the summary does not depend on trial order.
  mpz_class s1, s2, s3;
  std::uint64_t lo = UINT64_MAX, hi = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    std::vector<int> perm = base;
    std::shuffle(perm.begin(), perm.end(), rng);
    const std::uint64_t c = quicksort_count(std::move(perm), rng).comparisons;
    const mpz_class x(static_cast<unsigned long>(c));
    s1 += x;
    s2 += x * x;
    s3 += x * x * x;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }

  const Rational count(static_cast<unsigned long>(cfg.trials));
  const Rational mean = Rational(s1) / count;
  const Rational sum_sq_dev = Rational(s2) - Rational(s1) * mean;  // sum (x - mean)^2
  const Rational m3 = (Rational(s3) - Rational(3) * mean * Rational(s2) + Rational(2) * Rational(s1) * mean * mean) / count;
  const Rational pop_var = sum_sq_dev / count;

  EmpiricalStats out;
  out.trials = cfg.trials;
  out.mean = mean.to_double();
  out.variance = cfg.trials > 1 ? (sum_sq_dev / Rational(static_cast<unsigned long>(cfg.trials - 1))).to_double() : 0.0;
  out.skewness = pop_var.is_zero() ? 0.0 : m3.to_double() / std::pow(pop_var.to_double(), 1.5);
  out.min = lo;
  out.max = hi;
  return out;
}

}  // namespace qsa
