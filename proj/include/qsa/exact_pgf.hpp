#pragma once

// Exact distribution of the Quicksort comparison count X_n through the
// recurrence g_n(t) = t^(n-1)/n * sum_{k=1}^{n} g_{k-1}(t) g_{n-k}(t).
//
// Internally G_n = n! g_n has non-negative integer coefficients and obeys
//   G_n(t) = t^(n-1) * sum_k C(n-1, k-1) G_{k-1}(t) G_{n-k}(t),
// so every table is an integer vector plus the common denominator n!.
// Products are done by Kronecker substitution: each polynomial is packed into
// one big integer with fixed-width limb slots and multiplied by GMP.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qsa/rational.hpp"

namespace qsa {

/// Dense coefficient table: coeffs[i] is the coefficient of t^(offset + i).
struct CoefficientTable {
  std::int64_t offset = 0;
  std::vector<Rational> coeffs;

  friend bool operator==(const CoefficientTable&, const CoefficientTable&) = default;
};

/// Exact polynomial product.
inline CoefficientTable convolve(const CoefficientTable& a, const CoefficientTable& b) {
  CoefficientTable out;
  if (a.coeffs.empty() || b.coeffs.empty()) return out;
  out.offset = a.offset + b.offset;
  out.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, Rational());
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) out.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  }
  return out;
}

inline Rational eval(const CoefficientTable& table, const Rational& t) {
  Rational acc;
  for (auto it = table.coeffs.rbegin(); it != table.coeffs.rend(); ++it) acc = acc * t + *it;
  if (table.offset >= 0) return acc * pow(t, static_cast<unsigned>(table.offset));
  return acc / pow(t, static_cast<unsigned>(-table.offset));
}

/// Probability generating function of X_n. Pr(X_n = min_k + i) = weights[i] / scale, scale = n!.
class DistPoly {
 public:
  DistPoly(std::size_t n, std::uint64_t min_k, std::vector<mpz_class> weights, mpz_class scale)
      : n_(n), min_k_(min_k), weights_(std::move(weights)), scale_(std::move(scale)) {}

  std::size_t n() const { return n_; }
  std::uint64_t min_k() const { return min_k_; }
  std::uint64_t max_k() const { return min_k_ + weights_.size() - 1; }
  std::size_t size() const { return weights_.size(); }

  std::span<const mpz_class> weights() const { return weights_; }
  const mpz_class& scale() const { return scale_; }

  Rational probability(std::uint64_t k) const {
    if (k < min_k_ || k > max_k()) return Rational();
    return Rational(weights_[k - min_k_], scale_);
  }

  CoefficientTable table() const {
    CoefficientTable t;
    t.offset = static_cast<std::int64_t>(min_k_);
    t.coeffs.reserve(weights_.size());
    for (const auto& w : weights_) t.coeffs.emplace_back(w, scale_);
    return t;
  }

 private:
  std::size_t n_;
  std::uint64_t min_k_;
  std::vector<mpz_class> weights_;
  mpz_class scale_;
};

inline Rational eval(const DistPoly& g, const Rational& t) {
  mpq_class acc;
  for (std::size_t i = g.size(); i-- > 0;) acc = acc * t.mpq() + g.weights()[i];
  Rational value(std::move(acc));
  value *= pow(t, static_cast<unsigned>(g.min_k()));
  return value / Rational(g.scale());
}

namespace detail {

inline mpz_class pack_slots(std::span<const mpz_class> coeffs, std::size_t slot_limbs) {
  std::vector<mp_limb_t> buf(coeffs.size() * slot_limbs, 0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (mpz_sizeinbase(coeffs[i].get_mpz_t(), 2) > slot_limbs * GMP_NUMB_BITS) {
      throw std::logic_error("pack_slots: coefficient exceeds slot width");
    }
    std::size_t written = 0;
    mpz_export(buf.data() + i * slot_limbs, &written, -1, sizeof(mp_limb_t), 0, 0, coeffs[i].get_mpz_t());
  }
  mpz_class out;
  mpz_import(out.get_mpz_t(), buf.size(), -1, sizeof(mp_limb_t), 0, 0, buf.data());
  return out;
}

inline std::vector<mpz_class> unpack_slots(const mpz_class& packed, std::size_t slot_limbs, std::size_t length) {
  std::vector<mp_limb_t> buf(length * slot_limbs, 0);
  const std::size_t needed = (mpz_sizeinbase(packed.get_mpz_t(), 2) + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS;
  if (sgn(packed) != 0 && needed > buf.size()) throw std::logic_error("unpack_slots: packed value too large");
  std::size_t written = 0;
  mpz_export(buf.data(), &written, -1, sizeof(mp_limb_t), 0, 0, packed.get_mpz_t());
  std::vector<mpz_class> out(length);
  for (std::size_t i = 0; i < length; ++i) {
    mpz_import(out[i].get_mpz_t(), slot_limbs, -1, sizeof(mp_limb_t), 0, 0, buf.data() + i * slot_limbs);
  }
  return out;
}

}  // namespace detail

struct PgfOptions {
  /// Largest n the table will build. Denominators grow like n!, and the table
  /// for n = 130 holds roughly 350k big integers (tens of MB); raise with care.
  std::size_t max_n = 130;
  /// Sum each symmetric pair G_{k-1}G_{n-k} once and double it.
  bool fold_symmetric = true;
};

/// Memoized, bottom-up table of g_0, g_1, ...
class PgfTable {
 public:
  explicit PgfTable(PgfOptions options = {}) : options_(options) {}

  const PgfOptions& options() const { return options_; }

  /// g_n; builds every g_m with m < n first.
  const DistPoly& pgf(std::size_t n) {
    if (n > options_.max_n) {
      throw std::out_of_range("pgf: n = " + std::to_string(n) + " exceeds the configured maximum " +
                              std::to_string(options_.max_n));
    }
    std::lock_guard lock(mutex_);
    while (polys_.size() <= n) build_next();
    return polys_[n];
  }

  std::size_t computed() const { return polys_.size(); }

 private:
  void build_next() {
    const std::size_t n = polys_.size();
    if (n <= 1) {
      polys_.emplace_back(n, 0, std::vector<mpz_class>{mpz_class(1)}, mpz_class(1));
      return;
    }
    const mpz_class scale = factorial(n);
    // Every partial sum is bounded by n! because all terms are non-negative.
    const std::size_t bits = mpz_sizeinbase(scale.get_mpz_t(), 2) + 1;
    const std::size_t slot_limbs = (bits + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS;
    refresh_packed(slot_limbs);

    std::uint64_t base = UINT64_MAX;
    std::uint64_t top = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      const DistPoly& left = polys_[k - 1];
      const DistPoly& right = polys_[n - k];
      base = std::min<std::uint64_t>(base, left.min_k() + right.min_k());
      top = std::max<std::uint64_t>(top, left.max_k() + right.max_k());
    }

    mpz_class acc, term;
    const mpz_class two(2);
    auto accumulate = [&](std::size_t i, std::size_t j, const mpz_class& multiplier) {
      mpz_mul(term.get_mpz_t(), packed_[i].get_mpz_t(), packed_[j].get_mpz_t());
      term *= multiplier;
      const std::uint64_t shift = polys_[i].min_k() + polys_[j].min_k() - base;
      mpz_mul_2exp(term.get_mpz_t(), term.get_mpz_t(), shift * slot_limbs * GMP_NUMB_BITS);
      acc += term;
    };

    if (options_.fold_symmetric) {
      for (std::size_t k = 1; 2 * k < n + 1; ++k) accumulate(k - 1, n - k, two * binomial(n - 1, k - 1));
      if (n % 2 == 1) {
        const std::size_t mid = (n - 1) / 2;
        accumulate(mid, mid, binomial(n - 1, mid));
      }
    } else {
      for (std::size_t k = 1; k <= n; ++k) accumulate(k - 1, n - k, binomial(n - 1, k - 1));
    }

    std::vector<mpz_class> weights = detail::unpack_slots(acc, slot_limbs, top - base + 1);
    std::uint64_t min_k = base + (n - 1);
    auto first = std::find_if(weights.begin(), weights.end(), [](const mpz_class& w) { return sgn(w) != 0; });
    auto last = std::find_if(weights.rbegin(), weights.rend(), [](const mpz_class& w) { return sgn(w) != 0; });
    min_k += static_cast<std::uint64_t>(first - weights.begin());
    weights.erase(last.base(), weights.end());
    weights.erase(weights.begin(), first);
    polys_.emplace_back(n, min_k, std::move(weights), scale);
  }

  void refresh_packed(std::size_t slot_limbs) {
    if (slot_limbs != slot_limbs_) {
      packed_.clear();
      slot_limbs_ = slot_limbs;
    }
    while (packed_.size() < polys_.size()) {
      packed_.push_back(detail::pack_slots(polys_[packed_.size()].weights(), slot_limbs_));
    }
  }

  PgfOptions options_;
  std::mutex mutex_;
  std::deque<DistPoly> polys_;
  std::vector<mpz_class> packed_;
  std::size_t slot_limbs_ = 0;
};

}  // namespace qsa
