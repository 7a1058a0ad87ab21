#pragma once

// Raw, central and factorial moments of the comparison count X_n.
//
// Two routes: direct summation over an exact DistPoly, and the truncated
// series g_n(1+w) = sum_r f_r(n)/r! w^r obtained from
//   g_n(1+w) = (1+w)^(n-1)/n * sum_k g_{k-1}(1+w) g_{n-k}(1+w)
// keeping only powers w^0..w^M.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qsa/exact_pgf.hpp"
#include "qsa/rational.hpp"

namespace qsa {

/// E[X_n^r] = sum_k k^r Pr(X_n = k).
inline Rational raw_moment(const DistPoly& g, unsigned r) {
  mpz_class acc, power;
  for (std::size_t i = 0; i < g.size(); ++i) {
    mpz_ui_pow_ui(power.get_mpz_t(), g.min_k() + i, r);
    mpz_addmul(acc.get_mpz_t(), power.get_mpz_t(), g.weights()[i].get_mpz_t());
  }
  return Rational(acc, g.scale());
}

/// E[(X - mean)^r] from raw moments raw[0..r] by binomial expansion.
inline Rational central_from_raw(const std::vector<Rational>& raw, unsigned r) {
  if (raw.size() <= r) throw std::invalid_argument("central_from_raw: not enough raw moments");
  const Rational neg_mean = -raw[1];
  Rational acc;
  Rational shift_power(1);  // (-mean)^(r-i), built from i = r downwards
  for (unsigned i = r + 1; i-- > 0;) {
    acc += Rational(binomial(r, i)) * raw[i] * shift_power;
    shift_power *= neg_mean;
  }
  return acc;
}

inline Rational central_moment(const DistPoly& g, unsigned r) {
  if (r < 1) throw std::invalid_argument("central_moment: order must be at least 1");
  std::vector<Rational> raw;
  raw.reserve(r + 1);
  for (unsigned i = 0; i <= r; ++i) raw.push_back(raw_moment(g, i));
  return central_from_raw(raw, r);
}

/// Stirling numbers of the second kind S(r, j), cached row by row.
class StirlingTable {
 public:
  const std::vector<mpz_class>& row(unsigned r) {
    std::lock_guard lock(mutex_);
    if (rows_.empty()) rows_.push_back({mpz_class(1)});
    while (rows_.size() <= r) {
      const auto& prev = rows_.back();
      const std::size_t k = prev.size();  // building row k
      std::vector<mpz_class> next(k + 1);
      for (std::size_t j = 1; j <= k; ++j) {
        next[j] = (j < k ? mpz_class(prev[j] * static_cast<unsigned long>(j)) : mpz_class(0)) + prev[j - 1];
      }
      rows_.push_back(std::move(next));
    }
    return rows_[r];
  }

  static StirlingTable& shared() {
    static StirlingTable table;
    return table;
  }

 private:
  std::mutex mutex_;
  std::deque<std::vector<mpz_class>> rows_;
};

/// First order+1 coefficients of g_n(1+w); coeffs[r] = f_r(n) / r!.
struct TruncatedSeries {
  std::size_t n = 0;
  unsigned order = 0;
  std::vector<Rational> coeffs;

  /// f_r(n) = E[X(X-1)...(X-r+1)].
  Rational factorial_moment(unsigned r) const {
    if (r > order) throw std::out_of_range("factorial_moment: order exceeds truncation");
    return coeffs[r] * Rational(factorial(r));
  }
};

/// Series for n = 0..n_max truncated at w^order.
inline std::vector<TruncatedSeries> factorial_series(std::size_t n_max, unsigned order) {
  if (order < 1) throw std::invalid_argument("factorial_series: truncation order must be at least 1");
  const std::size_t width = order + 1;
  // scaled[n][j] = n! * [w^j] g_n(1+w), an integer.
  std::vector<std::vector<mpz_class>> scaled;
  scaled.reserve(n_max + 1);

  auto truncated_product = [width](const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                                    std::vector<mpz_class>& out, const mpz_class& multiplier) {
    mpz_class term;
    for (std::size_t i = 0; i < width; ++i) {
      if (sgn(a[i]) == 0) continue;
      for (std::size_t j = 0; i + j < width; ++j) {
        mpz_mul(term.get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
        mpz_addmul(out[i + j].get_mpz_t(), term.get_mpz_t(), multiplier.get_mpz_t());
      }
    }
  };

  std::vector<TruncatedSeries> out;
  out.reserve(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    std::vector<mpz_class> series(width);
    if (n <= 1) {
      series[0] = 1;
    } else {
      std::vector<mpz_class> sum(width);
      for (std::size_t k = 1; 2 * k < n + 1; ++k) {
        truncated_product(scaled[k - 1], scaled[n - k], sum, mpz_class(2 * binomial(n - 1, k - 1)));
      }
      if (n % 2 == 1) {
        const std::size_t mid = (n - 1) / 2;
        truncated_product(scaled[mid], scaled[mid], sum, binomial(n - 1, mid));
      }
      // multiply by (1+w)^(n-1)
      std::vector<mpz_class> shift(width);
      for (std::size_t j = 0; j < width && j <= n - 1; ++j) shift[j] = binomial(n - 1, j);
      truncated_product(shift, sum, series, mpz_class(1));
    }
    const mpz_class scale = factorial(n);
    TruncatedSeries ts{n, order, {}};
    ts.coeffs.reserve(width);
    for (const auto& c : series) ts.coeffs.emplace_back(c, scale);
    out.push_back(std::move(ts));
    scaled.push_back(std::move(series));
  }
  return out;
}

/// Raw moment E[X_n^r] = sum_j S(r, j) f_j(n).
inline Rational moments_from_factorial(const TruncatedSeries& series, unsigned r) {
  if (r > series.order) {
    throw std::out_of_range("moments_from_factorial: r = " + std::to_string(r) + " exceeds truncation order " +
                            std::to_string(series.order));
  }
  const auto& stirling = StirlingTable::shared().row(r);
  Rational acc;
  for (unsigned j = 0; j <= r; ++j) {
    if (sgn(stirling[j]) == 0) continue;
    acc += Rational(stirling[j]) * series.factorial_moment(j);
  }
  return acc;
}

inline Rational central_moment(const TruncatedSeries& series, unsigned r) {
  if (r < 1) throw std::invalid_argument("central_moment: order must be at least 1");
  std::vector<Rational> raw;
  raw.reserve(r + 1);
  for (unsigned i = 0; i <= r; ++i) raw.push_back(moments_from_factorial(series, i));
  return central_from_raw(raw, r);
}

/// One moment order across n. central == false means raw moments E[X_n^r].
struct MomentTable {
  unsigned r = 0;
  bool central = true;
  std::map<std::size_t, Rational> values;
};

/// Moment tables for orders 1..max_r over n = 0..n_max via the truncated series.
/// Order 1 is the mean c_n; orders >= 2 are central moments m_r(n).
inline std::vector<MomentTable> moment_tables(std::size_t n_max, unsigned max_r) {
  if (max_r < 1) throw std::invalid_argument("moment_tables: max_r must be at least 1");
  const auto series = factorial_series(n_max, max_r);
  std::vector<MomentTable> tables(max_r);
  for (unsigned r = 1; r <= max_r; ++r) {
    tables[r - 1].r = r;
    tables[r - 1].central = r >= 2;
  }
  for (const auto& s : series) {
    std::vector<Rational> raw;
    raw.reserve(max_r + 1);
    for (unsigned i = 0; i <= max_r; ++i) raw.push_back(moments_from_factorial(s, i));
    tables[0].values.emplace(s.n, raw[1]);
    for (unsigned r = 2; r <= max_r; ++r) tables[r - 1].values.emplace(s.n, central_from_raw(raw, r));
  }
  return tables;
}

}  // namespace qsa
