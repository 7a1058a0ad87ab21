#pragma once

// Exact rational scalar backed by GMP. Every value is kept in lowest terms
// with a positive denominator.

#include <compare>
#include <concepts>
#include <type_traits>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace qsa {

class Rational {
 public:
  Rational() = default;
  template <std::integral I>
  Rational(I value) {  // NOLINT(google-explicit-constructor)
    if constexpr (std::is_signed_v<I>) {
      v_ = static_cast<long>(value);
    } else {
      v_ = static_cast<unsigned long>(value);
    }
  }
  explicit Rational(const mpz_class& value) : v_(value) {}

  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    v_.get_num() = num;
    v_.get_den() = den;
    v_.canonicalize();
  }

  Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

  explicit Rational(mpq_class value) : v_(std::move(value)) { v_.canonicalize(); }

  /// Parses "p", "p/q" or "-p/q" in base 10.
  static Rational parse(const std::string& text) {
    mpq_class q;
    if (q.set_str(text, 10) != 0) throw std::invalid_argument("Rational: cannot parse '" + text + "'");
    if (q.get_den() == 0) throw std::domain_error("Rational: zero denominator");
    return Rational(std::move(q));
  }

  const mpz_class& numerator() const { return v_.get_num(); }
  const mpz_class& denominator() const { return v_.get_den(); }
  const mpq_class& mpq() const { return v_; }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  std::string str() const { return v_.get_str(10); }
  double to_double() const { return v_.get_d(); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(Rational a) {
    mpq_neg(a.v_.get_mpq_t(), a.v_.get_mpq_t());
    return a;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class v_;
};

inline Rational pow(const Rational& base, unsigned exponent) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.numerator().get_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.denominator().get_mpz_t(), exponent);
  // Powers of coprime integers stay coprime.
  mpq_class q;
  q.get_num() = std::move(num);
  q.get_den() = std::move(den);
  return Rational(std::move(q));
}

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline mpz_class factorial(unsigned long n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

inline mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

}  // namespace qsa
