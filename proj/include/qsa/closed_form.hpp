#pragma once

// Closed forms in n and the harmonic numbers H_1(n), ..., H_r(n), discovered by
// undetermined coefficients: pick a template of monomials, solve on a training
// range of n, then check every point of a held-out range exactly.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qsa/harmonic.hpp"
#include "qsa/modular.hpp"
#include "qsa/moments.hpp"
#include "qsa/rational.hpp"

namespace qsa {

/// n^n_power * prod_m H_m(n)^h_powers[m-1]. h_powers has no trailing zeros.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(unsigned n_power, std::vector<unsigned> h_powers = {})
      : n_power_(n_power), h_powers_(std::move(h_powers)) {
    trim();
  }

  /// H_order(n)^exponent.
  static Monomial harmonic(unsigned order, unsigned exponent = 1) {
    if (order < 1) throw std::invalid_argument("Monomial: harmonic order must be positive");
    std::vector<unsigned> h(order, 0);
    h[order - 1] = exponent;
    return Monomial(0, std::move(h));
  }

  unsigned n_power() const { return n_power_; }
  const std::vector<unsigned>& h_powers() const { return h_powers_; }

  unsigned h_power(unsigned order) const { return order >= 1 && order <= h_powers_.size() ? h_powers_[order - 1] : 0; }

  /// Highest m with a non-zero exponent (0 when there is no harmonic factor).
  unsigned max_order() const { return static_cast<unsigned>(h_powers_.size()); }

  /// sum_m m * b_m.
  unsigned weight() const {
    unsigned w = 0;
    for (std::size_t i = 0; i < h_powers_.size(); ++i) w += static_cast<unsigned>(i + 1) * h_powers_[i];
    return w;
  }

  bool has_harmonic() const { return !h_powers_.empty(); }

  /// The same monomial without its n factor.
  Monomial harmonic_part() const { return Monomial(0, h_powers_); }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    std::vector<unsigned> h(std::max(a.h_powers_.size(), b.h_powers_.size()), 0);
    for (std::size_t i = 0; i < a.h_powers_.size(); ++i) h[i] += a.h_powers_[i];
    for (std::size_t i = 0; i < b.h_powers_.size(); ++i) h[i] += b.h_powers_[i];
    return Monomial(a.n_power_ + b.n_power_, std::move(h));
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;

  // Lexicographic on (n_power, b_1, b_2, ...).
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.n_power_ <=> b.n_power_; c != 0) return c;
    const std::size_t len = std::max(a.h_powers_.size(), b.h_powers_.size());
    for (std::size_t i = 0; i < len; ++i) {
      const unsigned x = i < a.h_powers_.size() ? a.h_powers_[i] : 0;
      const unsigned y = i < b.h_powers_.size() ? b.h_powers_[i] : 0;
      if (auto c = x <=> y; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    auto sep = [&] {
      if (!first) os << '*';
      first = false;
    };
    if (n_power_ > 0) {
      sep();
      os << 'n';
      if (n_power_ > 1) os << '^' << n_power_;
    }
    for (std::size_t i = 0; i < h_powers_.size(); ++i) {
      if (h_powers_[i] == 0) continue;
      sep();
      os << 'H' << (i + 1);
      if (h_powers_[i] > 1) os << '^' << h_powers_[i];
    }
    if (first) os << '1';
    return os.str();
  }

 private:
  void trim() {
    while (!h_powers_.empty() && h_powers_.back() == 0) h_powers_.pop_back();
  }

  unsigned n_power_ = 0;
  std::vector<unsigned> h_powers_;
};

/// Rational combination of monomials; zero coefficients are never stored.
class HarmonicExpr {
 public:
  using Terms = std::map<Monomial, Rational>;

  HarmonicExpr() = default;
  HarmonicExpr(const Rational& constant) { add(Monomial(), constant); }  // NOLINT(google-explicit-constructor)
  HarmonicExpr(long constant) : HarmonicExpr(Rational(constant)) {}       // NOLINT(google-explicit-constructor)

  static HarmonicExpr monomial(const Monomial& m, const Rational& coeff = Rational(1)) {
    HarmonicExpr e;
    e.add(m, coeff);
    return e;
  }
  static HarmonicExpr n() { return monomial(Monomial(1)); }
  static HarmonicExpr H(unsigned order) { return monomial(Monomial::harmonic(order)); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational() : it->second;
  }

  void add(const Monomial& m, const Rational& coeff) {
    if (coeff.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  unsigned max_n_power() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.n_power());
    return d;
  }

  unsigned max_order() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.max_order());
    return d;
  }

  HarmonicExpr& operator+=(const HarmonicExpr& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  HarmonicExpr& operator-=(const HarmonicExpr& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  friend HarmonicExpr operator+(HarmonicExpr a, const HarmonicExpr& b) { return a += b; }
  friend HarmonicExpr operator-(HarmonicExpr a, const HarmonicExpr& b) { return a -= b; }
  friend HarmonicExpr operator-(const HarmonicExpr& a) { return HarmonicExpr() - a; }
  friend HarmonicExpr operator*(const HarmonicExpr& a, const HarmonicExpr& b) {
    HarmonicExpr out;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) out.add(ma * mb, ca * cb);
    }
    return out;
  }

  friend bool operator==(const HarmonicExpr&, const HarmonicExpr&) = default;

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) os << (c.sign() < 0 ? " - " : " + ");
      else if (c.sign() < 0) os << '-';
      first = false;
      os << abs(c).str();
      if (m != Monomial()) os << '*' << m.str();
    }
    return os.str();
  }

 private:
  Terms terms_;
};

inline HarmonicExpr pow(const HarmonicExpr& base, unsigned exponent) {
  HarmonicExpr out(1L);
  for (unsigned i = 0; i < exponent; ++i) out = out * base;
  return out;
}

namespace detail {

// sum over monomials, grouped by harmonic part: sum_h h(n) * poly_h(n).
template <typename HarmonicLookup>
Rational evaluate_grouped(const HarmonicExpr& expr, std::size_t n, HarmonicLookup&& harmonic_at) {
  Rational total;
  auto it = expr.terms().begin();
  // Terms are ordered by n power first, so collect groups explicitly.
  std::map<std::vector<unsigned>, Rational> groups;
  const mpz_class nz(static_cast<unsigned long>(n));
  for (; it != expr.terms().end(); ++it) {
    mpz_class np;
    mpz_pow_ui(np.get_mpz_t(), nz.get_mpz_t(), it->first.n_power());
    groups[it->first.h_powers()] += it->second * Rational(np);
  }
  for (const auto& [h, poly] : groups) {
    if (poly.is_zero()) continue;
    Rational value = poly;
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i] == 0) continue;
      value *= pow(harmonic_at(static_cast<unsigned>(i + 1), n), h[i]);
    }
    total += value;
  }
  return total;
}

}  // namespace detail

/// Exact value of expr at n; H_m(0) = 0.
inline Rational evaluate(const HarmonicExpr& expr, std::size_t n) {
  std::map<unsigned, Rational> cache;
  return detail::evaluate_grouped(expr, n, [&](unsigned m, std::size_t k) -> const Rational& {
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, harmonic(static_cast<int>(m), static_cast<std::int64_t>(k))).first;
    return it->second;
  });
}

/// Same as evaluate() but reuses a shared table of exact harmonic numbers.
inline Rational evaluate(const HarmonicExpr& expr, std::size_t n, HarmonicTable& table) {
  if (expr.max_order() > table.max_order()) throw std::invalid_argument("evaluate: harmonic table too small");
  return detail::evaluate_grouped(expr, n, [&](unsigned m, std::size_t k) -> const Rational& { return table.at(m, k); });
}

/// Every n^a * prod_{m<=r} H_m^b_m with a <= n_degree_bound and sum m*b_m <= h_weight_bound,
/// in canonical order.
inline std::vector<Monomial> template_monomials(unsigned r, unsigned n_degree_bound, unsigned h_weight_bound) {
  std::vector<std::vector<unsigned>> parts;
  std::vector<unsigned> current(r, 0);
  // enumerate exponent vectors b_1..b_r with weighted sum <= bound
  auto recurse = [&](auto&& self, unsigned order, unsigned remaining) -> void {
    if (order > r) {
      parts.push_back(current);
      return;
    }
    for (unsigned b = 0; b * order <= remaining; ++b) {
      current[order - 1] = b;
      self(self, order + 1, remaining - b * order);
    }
    current[order - 1] = 0;
  };
  if (r == 0) {
    parts.emplace_back();
  } else {
    recurse(recurse, 1, h_weight_bound);
  }
  std::vector<Monomial> out;
  out.reserve(parts.size() * (n_degree_bound + 1));
  for (unsigned a = 0; a <= n_degree_bound; ++a) {
    for (const auto& h : parts) out.emplace_back(a, h);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Inclusive integer interval.
struct Range {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const { return last >= first ? last - first + 1 : 0; }
  bool contains(std::size_t n) const { return n >= first && n <= last; }
  friend bool operator==(const Range&, const Range&) = default;

  /// Parses "A..B".
  static Range parse(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) throw std::invalid_argument("range must look like A..B: '" + text + "'");
    try {
      std::size_t used_a = 0, used_b = 0;
      const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
      Range r{std::stoul(a, &used_a), std::stoul(b, &used_b)};
      if (used_a != a.size() || used_b != b.size() || r.last < r.first) throw std::invalid_argument("");
      return r;
    } catch (const std::exception&) {
      throw std::invalid_argument("range must look like A..B with A <= B: '" + text + "'");
    }
  }

  std::string str() const { return std::to_string(first) + ".." + std::to_string(last); }
};

enum class FitStatus { verified, refuted, underdetermined };

inline const char* to_string(FitStatus s) {
  switch (s) {
    case FitStatus::verified: return "verified";
    case FitStatus::refuted: return "refuted";
    case FitStatus::underdetermined: return "underdetermined";
  }
  return "unknown";
}

struct FitReport {
  HarmonicExpr expr;
  Range train;
  Range test;
  std::vector<Rational> residuals;  // data(n) - expr(n) for each test point, in order
  FitStatus status = FitStatus::refuted;
  std::size_t unknowns = 0;
  std::size_t rank = 0;
  unsigned template_degree = 0;  // escalation level d that produced this report, when guessed
};

struct FitOptions {
  std::size_t slack = 5;
  std::size_t max_primes = 64;
};

/// Thrown when the training data cannot support the requested template.
class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void check_coverage(const std::map<std::size_t, Rational>& data, const Range& range, const char* what) {
  for (std::size_t n = range.first; n <= range.last; ++n) {
    if (!data.contains(n)) {
      throw InsufficientData(std::string("fit: no data for n = ") + std::to_string(n) + " in " + what + " range " +
                             range.str());
    }
  }
}

}  // namespace detail

/// Solves for the template coefficients on `train` and checks them on `test`.
///
/// The linear system is solved over several prime fields; the coefficients are
/// recovered by Chinese remaindering and rational reconstruction and accepted
/// only once they satisfy every training equation exactly over the rationals.
inline FitReport fit(const std::map<std::size_t, Rational>& data, const std::vector<Monomial>& monomials,
                     const Range& train, const Range& test, const FitOptions& options = {}) {
  if (monomials.empty()) throw std::invalid_argument("fit: empty template");
  if (train.first < 1 || test.first < 1) throw std::invalid_argument("fit: ranges must start at n >= 1");
  if (train.size() < monomials.size() + options.slack) {
    throw InsufficientData("fit: " + std::to_string(train.size()) + " training points for " +
                           std::to_string(monomials.size()) + " unknowns (slack " + std::to_string(options.slack) +
                           ")");
  }
  detail::check_coverage(data, train, "train");
  detail::check_coverage(data, test, "test");

  unsigned max_order = 1;
  for (const auto& m : monomials) max_order = std::max(max_order, m.max_order());
  HarmonicTable harmonics(max_order);

  FitReport report;
  report.train = train;
  report.test = test;
  report.unknowns = monomials.size();

  const std::size_t cols = monomials.size();
  const std::size_t n_rows = train.size();

  // Row of monomial values mod p at n (with the data value appended when requested).
  auto row_mod = [&](std::size_t n, modular::u64 p, std::vector<modular::u64>& h_mod, modular::u64* out) {
    for (unsigned m = 1; m <= max_order; ++m) {
      auto v = modular::reduce(harmonics.at(m, n), p);
      if (!v) return false;
      h_mod[m] = *v;
    }
    const modular::u64 n_mod = n % p;
    for (std::size_t c = 0; c < cols; ++c) {
      const Monomial& mono = monomials[c];
      modular::u64 v = modular::pow_mod(n_mod, mono.n_power(), p);
      for (unsigned m = 1; m <= mono.max_order(); ++m) {
        const unsigned b = mono.h_power(m);
        if (b) v = v * modular::pow_mod(h_mod[m], b, p) % p;
      }
      out[c] = v;
    }
    return true;
  };

  modular::PrimeSequence primes;
  std::optional<modular::CrtVector> crt;
  std::size_t best_rank = 0;
  std::size_t inconsistent_votes = 0;
  std::size_t underdetermined_votes = 0;
  std::optional<std::vector<Rational>> previous;

  for (std::size_t pi = 0; pi < options.max_primes; ++pi) {
    const modular::u64 p = primes(pi);
    std::vector<modular::u64> system(n_rows * (cols + 1));
    std::vector<modular::u64> h_mod(max_order + 1);
    bool usable = true;
    for (std::size_t i = 0; i < n_rows && usable; ++i) {
      const std::size_t n = train.first + i;
      modular::u64* row = &system[i * (cols + 1)];
      usable = row_mod(n, p, h_mod, row);
      auto rhs = modular::reduce(data.at(n), p);
      if (!rhs) usable = false;
      else row[cols] = *rhs;
    }
    if (!usable) continue;

    const modular::EchelonResult ech = modular::solve_mod(std::move(system), n_rows, cols, p);
    if (ech.rank < best_rank) continue;  // unlucky prime
    if (ech.rank > best_rank) {
      best_rank = ech.rank;
      crt.reset();
      previous.reset();
      inconsistent_votes = 0;
      underdetermined_votes = 0;
    }
    report.rank = best_rank;

    if (!ech.consistent) {
      if (++inconsistent_votes >= 2) {
        report.status = FitStatus::refuted;
        return report;
      }
      continue;
    }

    if (!ech.nullspace.empty()) {
      // Free variables matter only if they move some test value.
      bool affects_test = false;
      std::vector<modular::u64> test_row(cols);
      for (std::size_t n = test.first; n <= test.last && !affects_test; ++n) {
        if (!row_mod(n, p, h_mod, test_row.data())) break;
        for (const auto& v : ech.nullspace) {
          modular::u64 dot = 0;
          for (std::size_t c = 0; c < cols; ++c) dot = (dot + test_row[c] * v[c]) % p;
          if (dot != 0) {
            affects_test = true;
            break;
          }
        }
      }
      if (affects_test) {
        if (++underdetermined_votes >= 2) {
          report.status = FitStatus::underdetermined;
          return report;
        }
        continue;
      }
    }

    if (!crt) crt.emplace(cols);
    crt->add(ech.solution, p);

    std::vector<Rational> candidate;
    candidate.reserve(cols);
    for (const auto& v : crt->values()) {
      auto q = modular::reconstruct(v, crt->modulus());
      if (!q) break;
      candidate.push_back(*q);
    }
    if (candidate.size() != cols) continue;
    if (!previous || *previous != candidate) {
      previous = std::move(candidate);
      continue;
    }

    HarmonicExpr expr;
    for (std::size_t c = 0; c < cols; ++c) expr.add(monomials[c], candidate[c]);
    bool exact_on_train = true;
    for (std::size_t n = train.first; n <= train.last; ++n) {
      if (evaluate(expr, n, harmonics) != data.at(n)) {
        exact_on_train = false;
        break;
      }
    }
    if (!exact_on_train) continue;

    report.expr = std::move(expr);
    bool all_zero = true;
    report.residuals.reserve(test.size());
    for (std::size_t n = test.first; n <= test.last; ++n) {
      report.residuals.push_back(data.at(n) - evaluate(report.expr, n, harmonics));
      if (!report.residuals.back().is_zero()) all_zero = false;
    }
    report.status = all_zero ? FitStatus::verified : FitStatus::refuted;
    return report;
  }
  throw std::runtime_error("fit: coefficient reconstruction did not stabilize after " +
                           std::to_string(options.max_primes) + " primes");
}

/// Thrown when no template on the escalation ladder verifies.
class GuessExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GuessOptions {
  std::optional<Range> train;    // default: 1..(unknowns + slack)
  std::optional<Range> test;     // default: the following points, see below
  std::size_t min_test_points = 150;
  std::size_t min_test_last = 306;
  unsigned max_degree = 0;       // 0 means r
  FitOptions fit;
};

/// Data range a default guess at degree d needs: train 1..u+slack, then test points.
inline std::pair<Range, Range> default_ranges(unsigned r, unsigned d, const GuessOptions& options = {}) {
  const std::size_t unknowns = template_monomials(r, d, d).size();
  const Range train{1, unknowns + options.fit.slack};
  const Range test{train.last + 1, std::max(train.last + options.min_test_points, options.min_test_last)};
  return {train, test};
}

/// Largest n the default escalation ladder for moment order r touches.
inline std::size_t required_n_max(unsigned r, const GuessOptions& options = {}) {
  const unsigned top = options.max_degree ? options.max_degree : r;
  std::size_t need = 0;
  for (unsigned d = 1; d <= top; ++d) need = std::max(need, default_ranges(r, d, options).second.last);
  return need;
}

/// Escalates d = 1, 2, ... with template (r, d, d) until a fit verifies.
inline FitReport guess_moment(unsigned r, const std::map<std::size_t, Rational>& data, const GuessOptions& options = {}) {
  if (r < 1) throw std::invalid_argument("guess_moment: r must be at least 1");
  const unsigned top = options.max_degree ? options.max_degree : r;
  std::string last_problem;
  for (unsigned d = 1; d <= top; ++d) {
    auto [train, test] = default_ranges(r, d, options);
    if (options.train) train = *options.train;
    if (options.test) test = *options.test;
    const auto monomials = template_monomials(r, d, d);
    try {
      FitReport report = fit(data, monomials, train, test, options.fit);
      report.template_degree = d;
      if (report.status == FitStatus::verified) return report;
      last_problem = std::string("status ") + to_string(report.status);
    } catch (const InsufficientData& e) {
      last_problem = e.what();
      break;
    }
  }
  throw GuessExhausted("guess_moment: no verified closed form for r = " + std::to_string(r) +
                       " up to template (" + std::to_string(r) + ", " + std::to_string(top) + ", " +
                       std::to_string(top) + "); last attempt: " + last_problem);
}

/// Generates the moment data itself (mean for r = 1, central moment otherwise).
inline FitReport guess_moment(unsigned r, std::size_t n_max_data, const GuessOptions& options = {}) {
  auto tables = moment_tables(n_max_data, r);
  return guess_moment(r, tables[r - 1].values, options);
}

/// Closed forms the rest of the library relies on.
namespace known {

/// c_n = 2(n+1)H_1(n) - 4n.
inline HarmonicExpr mean() {
  const auto n = HarmonicExpr::n();
  return HarmonicExpr(2L) * (n + 1L) * HarmonicExpr::H(1) - HarmonicExpr(4L) * n;
}

/// m_2(n) = n(7n+13) - 2(n+1)H_1(n) - 4(n+1)^2 H_2(n).
inline HarmonicExpr variance() {
  const auto n = HarmonicExpr::n();
  return n * (HarmonicExpr(7L) * n + 13L) - HarmonicExpr(2L) * (n + 1L) * HarmonicExpr::H(1) -
         HarmonicExpr(4L) * pow(n + 1L, 2) * HarmonicExpr::H(2);
}

}  // namespace known

}  // namespace qsa
