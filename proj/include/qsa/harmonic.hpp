#pragma once

// Generalized harmonic numbers H_m(n) = sum_{i=1}^{n} 1/i^m, exact and asymptotic.

#include <cstdint>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qsa/constants.hpp"
#include "qsa/high_real.hpp"
#include "qsa/rational.hpp"

namespace qsa {

namespace detail {

// Sum of 1/i^m for i in [lo, hi) as an unreduced fraction num/den.
inline void harmonic_split(unsigned m, std::uint64_t lo, std::uint64_t hi, mpz_class& num, mpz_class& den) {
  if (hi - lo == 1) {
    num = 1;
    mpz_ui_pow_ui(den.get_mpz_t(), lo, m);
    return;
  }
  const std::uint64_t mid = lo + (hi - lo) / 2;
  mpz_class ln, ld, rn, rd;
  harmonic_split(m, lo, mid, ln, ld);
  harmonic_split(m, mid, hi, rn, rd);
  num = ln * rd + rn * ld;
  den = ld * rd;
}

inline constexpr std::uint64_t kDirectSumLimit = 512;

}  // namespace detail

inline Rational harmonic(int m, std::int64_t n) {
  if (m < 1) throw std::invalid_argument("harmonic: order m must be positive");
  if (n < 0) throw std::invalid_argument("harmonic: n must be non-negative");
  if (n == 0) return Rational();
  const auto order = static_cast<unsigned>(m);
  const auto count = static_cast<std::uint64_t>(n);
  if (count <= detail::kDirectSumLimit) {
    mpq_class sum;
    mpz_class power;
    for (std::uint64_t i = 1; i <= count; ++i) {
      mpz_ui_pow_ui(power.get_mpz_t(), i, order);
      sum += mpq_class(1, power);
    }
    return Rational(std::move(sum));
  }
  mpz_class num, den;
  detail::harmonic_split(order, 1, count + 1, num, den);
  return Rational(num, den);
}

/// Bernoulli numbers B_0..B_count (B_1 = -1/2 convention).
inline std::vector<Rational> bernoulli_numbers(unsigned count) {
  std::vector<Rational> b(count + 1);
  b[0] = 1;
  for (unsigned k = 1; k <= count; ++k) {
    Rational acc;
    for (unsigned j = 0; j < k; ++j) acc += Rational(binomial(k + 1, j)) * b[j];
    b[k] = -acc / Rational(static_cast<long>(k + 1));
  }
  return b;
}

/// Euler-Maclaurin approximation of H_m(n) with `terms` Bernoulli corrections.
/// For m = 1: ln n + gamma + 1/(2n) - sum_k B_2k/(2k n^2k).
/// For m >= 2: zeta(m) minus the Euler-Maclaurin estimate of the tail beyond n.
inline HighReal harmonic_asymptotic(int m, const mpz_class& n, unsigned terms = 4, unsigned digits = kMinDigits) {
  if (m < 1) throw std::invalid_argument("harmonic_asymptotic: order m must be positive");
  if (n < 1) throw std::invalid_argument("harmonic_asymptotic: n must be positive");
  const auto order = static_cast<unsigned>(m);
  const std::vector<Rational> bern = bernoulli_numbers(2 * terms);
  const HighReal x(n, digits);
  const HighReal inv = HighReal(1L, digits) / x;

  if (order == 1) {
    HighReal result = log(x) + euler_gamma(digits) + inv / HighReal(2L, digits);
    HighReal inv_sq = inv * inv;
    HighReal power = inv_sq;
    for (unsigned k = 1; k <= terms; ++k) {
      result -= HighReal(bern[2 * k] / Rational(static_cast<long>(2 * k)), digits) * power;
      power *= inv_sq;
    }
    return result;
  }

  // tail(n) = n^(1-m)/(m-1) - n^(-m)/2 + sum_k B_2k/(2k)! (m)_(2k-1) n^(-m-2k+1)
  HighReal inv_pow_m = pow(inv, static_cast<long>(order));
  HighReal tail = inv_pow_m * x / HighReal(static_cast<long>(order - 1), digits) - inv_pow_m / HighReal(2L, digits);
  HighReal power = inv_pow_m * inv;  // n^(-m-1)
  const HighReal inv_sq = inv * inv;
  for (unsigned k = 1; k <= terms; ++k) {
    // rising factorial (m)_(2k-1) / (2k)!
    mpz_class rising = 1;
    for (unsigned j = 0; j < 2 * k - 1; ++j) rising *= order + j;
    const Rational weight = bern[2 * k] * Rational(rising, factorial(2 * k));
    tail += HighReal(weight, digits) * power;
    power *= inv_sq;
  }
  return zeta(order, digits) - tail;
}

inline HighReal harmonic_asymptotic(int m, std::uint64_t n, unsigned terms = 4, unsigned digits = kMinDigits) {
  return harmonic_asymptotic(m, mpz_class(static_cast<unsigned long>(n)), terms, digits);
}

/// Incrementally extended table of exact H_m(n) for 1 <= m <= max_order.
class HarmonicTable {
 public:
  explicit HarmonicTable(unsigned max_order) : rows_(max_order) {
    if (max_order == 0) throw std::invalid_argument("HarmonicTable: max_order must be positive");
    for (auto& row : rows_) row.emplace_back();  // H_m(0) = 0
  }

  unsigned max_order() const { return static_cast<unsigned>(rows_.size()); }

  /// H_m(n); extends the table up to n on demand. References stay valid.
  const Rational& at(unsigned m, std::size_t n) {
    if (m < 1 || m > rows_.size()) throw std::out_of_range("HarmonicTable: order out of range");
    std::lock_guard lock(mutex_);
    extend(n);
    return rows_[m - 1][n];
  }

 private:
  void extend(std::size_t n) {
    for (std::size_t m = 1; m <= rows_.size(); ++m) {
      auto& row = rows_[m - 1];
      mpz_class power;
      for (std::size_t i = row.size(); i <= n; ++i) {
        mpz_ui_pow_ui(power.get_mpz_t(), i, static_cast<unsigned long>(m));
        row.push_back(row.back() + Rational(mpz_class(1), power));
      }
    }
  }

  std::mutex mutex_;
  std::vector<std::deque<Rational>> rows_;
};

}  // namespace qsa
