#pragma once

// Owning MPFR value with a decimal-digit precision. Binary results take the
// larger precision of the two operands.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

#include "qsa/rational.hpp"

namespace qsa {

inline constexpr unsigned kMinDigits = 50;

class HighReal {
 public:
  explicit HighReal(unsigned digits = kMinDigits) : digits_(checked(digits)) {
    mpfr_init2(v_, bits_for(digits_));
    mpfr_set_zero(v_, 1);
  }

  HighReal(long value, unsigned digits) : HighReal(digits) { mpfr_set_si(v_, value, MPFR_RNDN); }

  HighReal(const Rational& value, unsigned digits) : HighReal(digits) {
    mpfr_set_q(v_, value.mpq().get_mpq_t(), MPFR_RNDN);
  }

  HighReal(const mpz_class& value, unsigned digits) : HighReal(digits) {
    mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
  }

  static HighReal parse(const std::string& text, unsigned digits) {
    HighReal r(digits);
    if (mpfr_set_str(r.v_, text.c_str(), 10, MPFR_RNDN) != 0) {
      throw std::invalid_argument("HighReal: cannot parse '" + text + "'");
    }
    return r;
  }

  HighReal(const HighReal& o) : digits_(o.digits_) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  HighReal(HighReal&& o) noexcept : digits_(o.digits_) {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  HighReal& operator=(const HighReal& o) {
    if (this != &o) {
      digits_ = o.digits_;
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  HighReal& operator=(HighReal&& o) noexcept {
    std::swap(digits_, o.digits_);
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~HighReal() { mpfr_clear(v_); }

  unsigned digits() const { return digits_; }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  /// Scientific notation with `significant` digits (defaults to the working precision).
  std::string str(unsigned significant = 0) const {
    if (significant == 0) significant = digits_;
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", static_cast<int>(significant - 1), v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  /// Fixed-point notation with `decimals` digits after the point.
  std::string fixed(unsigned decimals) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rf", static_cast<int>(decimals), v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  HighReal& operator+=(const HighReal& o) { return apply(o, mpfr_add); }
  HighReal& operator-=(const HighReal& o) { return apply(o, mpfr_sub); }
  HighReal& operator*=(const HighReal& o) { return apply(o, mpfr_mul); }
  HighReal& operator/=(const HighReal& o) {
    if (o.is_zero()) throw std::domain_error("HighReal: division by zero");
    return apply(o, mpfr_div);
  }

  friend HighReal operator+(HighReal a, const HighReal& b) { return a += b; }
  friend HighReal operator-(HighReal a, const HighReal& b) { return a -= b; }
  friend HighReal operator*(HighReal a, const HighReal& b) { return a *= b; }
  friend HighReal operator/(HighReal a, const HighReal& b) { return a /= b; }
  friend HighReal operator-(HighReal a) {
    mpfr_neg(a.v_, a.v_, MPFR_RNDN);
    return a;
  }

  friend bool operator==(const HighReal& a, const HighReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const HighReal& a, const HighReal& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    const int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }

  friend std::ostream& operator<<(std::ostream& os, const HighReal& x) { return os << x.str(); }

  static mpfr_prec_t bits_for(unsigned digits) {
    // 3.3219... bits per decimal digit plus a small guard.
    return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 8;
  }

 private:
  static unsigned checked(unsigned digits) {
    if (digits < kMinDigits) {
      throw std::invalid_argument("HighReal: precision must be at least " + std::to_string(kMinDigits) +
                                  " digits");
    }
    return digits;
  }

  template <typename Op>
  HighReal& apply(const HighReal& o, Op op) {
    if (o.digits_ > digits_) {
      digits_ = o.digits_;
      mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
    }
    op(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }

  unsigned digits_;
  mpfr_t v_;
};

namespace detail {
template <typename Fn>
HighReal unary(const HighReal& x, Fn fn) {
  HighReal r(x.digits());
  fn(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
}  // namespace detail

inline HighReal log(const HighReal& x) { return detail::unary(x, mpfr_log); }
inline HighReal exp(const HighReal& x) { return detail::unary(x, mpfr_exp); }
inline HighReal abs(const HighReal& x) { return detail::unary(x, mpfr_abs); }

inline HighReal sqrt(const HighReal& x) {
  if (x.sign() < 0) throw std::domain_error("HighReal: sqrt of a negative value");
  return detail::unary(x, mpfr_sqrt);
}

inline HighReal pow(const HighReal& x, long exponent) {
  HighReal r(x.digits());
  mpfr_pow_si(r.raw(), x.raw(), exponent, MPFR_RNDN);
  return r;
}

inline HighReal pow(const HighReal& x, const HighReal& exponent) {
  HighReal r(std::max(x.digits(), exponent.digits()));
  mpfr_pow(r.raw(), x.raw(), exponent.raw(), MPFR_RNDN);
  return r;
}

inline HighReal log10(const HighReal& x) { return detail::unary(x, mpfr_log10); }

/// Number of leading decimal digits on which `a` and `b` agree, relative to |b|.
/// Returns the working precision when they are identical.
inline unsigned agreeing_digits(const HighReal& a, const HighReal& b) {
  const unsigned cap = std::min(a.digits(), b.digits());
  HighReal diff = abs(a - b);
  if (diff.is_zero()) return cap;
  HighReal scale = abs(b);
  if (scale.is_zero()) return 0;
  HighReal rel = diff / scale;
  const double d = -log10(rel).to_double();
  if (d <= 0) return 0;
  return std::min(cap, static_cast<unsigned>(std::floor(d)));
}

}  // namespace qsa
