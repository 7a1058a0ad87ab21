#pragma once

// Prime-field linear algebra and rational reconstruction used by the
// closed-form fitter. Primes are kept below 2^31 so that a*b + c fits in 64 bits.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qsa/rational.hpp"

namespace qsa::modular {

using u64 = std::uint64_t;

inline u64 pow_mod(u64 base, u64 exp, u64 p) {
  u64 result = 1;
  base %= p;
  while (exp > 0) {
    if (exp & 1U) result = result * base % p;
    base = base * base % p;
    exp >>= 1U;
  }
  return result;
}

inline u64 inverse(u64 a, u64 p) {
  if (a % p == 0) throw std::domain_error("modular inverse of zero");
  return pow_mod(a, p - 2, p);
}

/// Distinct primes below 2^31, largest first.
class PrimeSequence {
 public:
  u64 operator()(std::size_t i) {
    while (primes_.size() <= i) {
      mpz_class candidate = primes_.empty() ? mpz_class((1UL << 31U) - 1) : mpz_class(primes_.back() - 2);
      while (mpz_probab_prime_p(candidate.get_mpz_t(), 30) == 0) candidate -= 2;
      primes_.push_back(candidate.get_ui());
    }
    return primes_[i];
  }

 private:
  std::vector<u64> primes_;
};

/// num/den mod p, or nullopt when p divides the denominator.
inline std::optional<u64> reduce(const Rational& value, u64 p) {
  const u64 den = mpz_fdiv_ui(value.denominator().get_mpz_t(), p);
  if (den == 0) return std::nullopt;
  const u64 num = mpz_fdiv_ui(value.numerator().get_mpz_t(), p);
  return num * inverse(den, p) % p;
}

/// Reduced row echelon form of an augmented system [A | b] over GF(p).
struct EchelonResult {
  std::size_t rank = 0;        // rank of A
  bool consistent = true;      // rank [A|b] == rank A
  std::vector<std::size_t> pivot_columns;
  std::vector<u64> solution;   // free variables set to zero
  std::vector<std::vector<u64>> nullspace;  // one basis vector per free column
};

/// `rows` is row-major with cols + 1 entries per row (last entry is b).
inline EchelonResult solve_mod(std::vector<u64> rows, std::size_t n_rows, std::size_t cols, u64 p) {
  const std::size_t stride = cols + 1;
  auto at = [&](std::size_t r, std::size_t c) -> u64& { return rows[r * stride + c]; };

  EchelonResult out;
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < cols && pivot_row < n_rows; ++c) {
    std::size_t found = pivot_row;
    while (found < n_rows && at(found, c) == 0) ++found;
    if (found == n_rows) continue;
    if (found != pivot_row) {
      for (std::size_t k = c; k < stride; ++k) std::swap(at(found, k), at(pivot_row, k));
    }
    const u64 inv = inverse(at(pivot_row, c), p);
    for (std::size_t k = c; k < stride; ++k) at(pivot_row, k) = at(pivot_row, k) * inv % p;
    const u64* prow = &rows[pivot_row * stride];
    for (std::size_t r = 0; r < n_rows; ++r) {
      if (r == pivot_row) continue;
      const u64 f = at(r, c);
      if (f == 0) continue;
      const u64 neg = p - f;
      u64* row = &rows[r * stride];
      for (std::size_t k = c; k < stride; ++k) row[k] = (row[k] + neg * prow[k]) % p;
    }
    out.pivot_columns.push_back(c);
    ++pivot_row;
  }
  out.rank = pivot_row;
  for (std::size_t r = out.rank; r < n_rows; ++r) {
    if (at(r, cols) != 0) {
      out.consistent = false;
      break;
    }
  }

  out.solution.assign(cols, 0);
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t i = 0; i < out.rank; ++i) {
    out.solution[out.pivot_columns[i]] = at(i, cols);
    is_pivot[out.pivot_columns[i]] = true;
  }
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<u64> v(cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < out.rank; ++i) v[out.pivot_columns[i]] = (p - at(i, free)) % p;
    out.nullspace.push_back(std::move(v));
  }
  return out;
}

/// Incremental Chinese remaindering of a vector of residues.
class CrtVector {
 public:
  explicit CrtVector(std::size_t size) : values_(size), modulus_(1) {}

  void add(const std::vector<u64>& residues, u64 p) {
    if (residues.size() != values_.size()) throw std::invalid_argument("CrtVector: size mismatch");
    const u64 m_mod_p = mpz_fdiv_ui(modulus_.get_mpz_t(), p);
    const u64 inv = inverse(m_mod_p, p);
    mpz_class step;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const u64 current = mpz_fdiv_ui(values_[i].get_mpz_t(), p);
      const u64 delta = (residues[i] + p - current) % p * inv % p;
      step = modulus_ * static_cast<unsigned long>(delta);
      values_[i] += step;
    }
    modulus_ *= static_cast<unsigned long>(p);
  }

  const std::vector<mpz_class>& values() const { return values_; }
  const mpz_class& modulus() const { return modulus_; }

 private:
  std::vector<mpz_class> values_;
  mpz_class modulus_;
};

/// Smallest-height rational congruent to `residue` mod `modulus`, with
/// numerator and denominator bounded by sqrt(modulus / 2).
inline std::optional<Rational> reconstruct(const mpz_class& residue, const mpz_class& modulus) {
  mpz_class bound;
  mpz_class half = modulus / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  mpz_class r0 = modulus, r1 = residue % modulus;
  if (r1 < 0) r1 += modulus;
  mpz_class s0 = 0, s1 = 1, q, tmp;
  while (r1 > bound) {
    q = r0 / r1;
    tmp = r0 - q * r1;
    r0 = std::move(r1);
    r1 = std::move(tmp);
    tmp = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(tmp);
  }
  if (abs(s1) > bound || s1 == 0) return std::nullopt;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), s1.get_mpz_t());
  if (g != 1) return std::nullopt;
  return Rational(r1, s1);
}

}  // namespace qsa::modular
