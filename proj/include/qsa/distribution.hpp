#pragma once

// The standardized comparison count Z_n = (X_n - c_n) / sqrt(m_2(n)), its
// histogram, and tail estimates for large n that reuse a smaller Z_s.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <mpfr.h>

#include "qsa/closed_form.hpp"
#include "qsa/exact_pgf.hpp"
#include "qsa/high_real.hpp"
#include "qsa/rational.hpp"

namespace qsa {

struct ScaledPoint {
  std::uint64_t k = 0;  // comparison count
  HighReal z;
  Rational mass;
};

struct ScaledDistribution {
  std::size_t n = 0;
  Rational mean_k;      // c_n
  Rational variance_k;  // m_2(n)
  HighReal sd;          // sqrt(m_2(n))
  std::vector<ScaledPoint> points;

  Rational total_mass() const {
    Rational total;
    for (const auto& p : points) total += p.mass;
    return total;
  }

  /// Exact E[(X_n - c_n)^r] over the atoms.
  Rational central_moment_k(unsigned r) const {
    Rational acc;
    for (const auto& p : points) acc += p.mass * pow(Rational(p.k) - mean_k, r);
    return acc;
  }

  /// E[Z^r] at working precision.
  HighReal moment(unsigned r) const {
    HighReal acc(sd.digits());
    for (const auto& p : points) acc += HighReal(p.mass, sd.digits()) * pow(p.z, static_cast<long>(r));
    return acc;
  }

  /// Cumulative masses in increasing z.
  std::vector<Rational> cdf() const {
    std::vector<Rational> out;
    out.reserve(points.size());
    Rational running;
    for (const auto& p : points) {
      running += p.mass;
      out.push_back(running);
    }
    return out;
  }
};

inline ScaledDistribution scale(PgfTable& table, std::size_t n, unsigned digits = kMinDigits) {
  if (n < 3) throw std::invalid_argument("scale: n must be at least 3 (X_0, X_1 and X_2 are constant)");
  const DistPoly& g = table.pgf(n);
  ScaledDistribution out;
  out.n = n;
  out.mean_k = evaluate(known::mean(), n);
  out.variance_k = evaluate(known::variance(), n);
  out.sd = sqrt(HighReal(out.variance_k, digits));
  const HighReal mean(out.mean_k, digits);
  out.points.reserve(g.size());
  for (std::uint64_t k = g.min_k(); k <= g.max_k(); ++k) {
    Rational mass = g.probability(k);
    if (mass.is_zero()) continue;
    out.points.push_back({k, (HighReal(Rational(k), digits) - mean) / out.sd, std::move(mass)});
  }
  return out;
}

struct TailResult {
  HighReal probability;
  bool saturated = false;  // threshold lies below the surrogate's support
};

/// Pr(X_{n_large} > threshold), read off the surrogate Z_s mapped onto the
/// scale of X_{n_large}. Between integer counts the surrogate survival function
/// is interpolated linearly.
inline TailResult tail_probability(PgfTable& table, std::size_t n_large, const Rational& threshold,
                                   std::size_t surrogate_n = 130, unsigned digits = kMinDigits) {
  if (n_large < 3) throw std::invalid_argument("tail_probability: n must be at least 3");
  if (surrogate_n < 3) throw std::invalid_argument("tail_probability: surrogate n must be at least 3");
  const DistPoly& g = table.pgf(surrogate_n);

  const Rational mean_large = evaluate(known::mean(), n_large);
  const Rational var_large = evaluate(known::variance(), n_large);
  const Rational mean_s = evaluate(known::mean(), surrogate_n);
  const Rational var_s = evaluate(known::variance(), surrogate_n);

  // Survival at integer counts: S(j) = Pr(X_s > j).
  const std::int64_t lo = static_cast<std::int64_t>(g.min_k());
  const std::int64_t hi = static_cast<std::int64_t>(g.max_k());
  auto survival = [&](std::int64_t j) -> Rational {
    if (j < lo) return Rational(1);
    if (j >= hi) return Rational();
    mpz_class above;
    for (std::int64_t k = j + 1; k <= hi; ++k) above += g.weights()[static_cast<std::size_t>(k - lo)];
    return Rational(above, g.scale());
  };

  // Position of the threshold on the surrogate's count axis.
  const Rational delta = threshold - mean_large;
  const Rational ratio = var_s / var_large;
  std::optional<Rational> exact_position;
  if (delta.is_zero()) {
    exact_position = mean_s;
  } else if (mpz_perfect_square_p(ratio.numerator().get_mpz_t()) &&
             mpz_perfect_square_p(ratio.denominator().get_mpz_t())) {
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), ratio.numerator().get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), ratio.denominator().get_mpz_t());
    exact_position = mean_s + delta * Rational(rn, rd);
  }

  TailResult out{HighReal(digits), false};
  if (exact_position) {
    mpz_class floor_k;
    mpz_fdiv_q(floor_k.get_mpz_t(), exact_position->numerator().get_mpz_t(),
               exact_position->denominator().get_mpz_t());
    const Rational frac = *exact_position - Rational(floor_k);
    const std::int64_t j = mpz_fits_slong_p(floor_k.get_mpz_t()) ? floor_k.get_si() : (sgn(floor_k) < 0 ? lo - 2 : hi + 1);
    const Rational value = survival(j) + frac * (survival(j + 1) - survival(j));
    out.probability = HighReal(value, digits);
    out.saturated = j < lo - 1 || (j == lo - 1 && frac.is_zero());
    return out;
  }

  const HighReal position = HighReal(mean_s, digits) + HighReal(delta, digits) * sqrt(HighReal(ratio, digits));
  HighReal floor_value(digits);
  mpfr_floor(floor_value.raw(), position.raw());
  const HighReal frac = position - floor_value;
  const double fd = floor_value.to_double();
  const std::int64_t j = fd < static_cast<double>(lo - 2) ? lo - 2 : (fd > static_cast<double>(hi + 1) ? hi + 1 : static_cast<std::int64_t>(fd));
  const HighReal s0(survival(j), digits);
  const HighReal s1(survival(j + 1), digits);
  out.probability = s0 + frac * (s1 - s0);
  out.saturated = j < lo - 1 || (j == lo - 1 && frac.is_zero());
  return out;
}

struct DensityBin {
  HighReal z_left;
  HighReal z_right;
  Rational mass;
};

/// Equal-width histogram of Z_n; bins start at the smallest z and are half-open [left, right).
inline std::vector<DensityBin> export_density(const ScaledDistribution& dist, const HighReal& bin_width) {
  if (bin_width.sign() <= 0) throw std::invalid_argument("export_density: bin width must be positive");
  if (dist.points.empty()) return {};
  const HighReal& origin = dist.points.front().z;
  std::vector<DensityBin> bins;
  for (const auto& p : dist.points) {
    HighReal offset = (p.z - origin) / bin_width;
    mpfr_floor(offset.raw(), offset.raw());
    const auto index = static_cast<std::size_t>(offset.to_double());
    while (bins.size() <= index) {
      const long i = static_cast<long>(bins.size());
      const HighReal left = bins.empty() ? origin : bins.back().z_right;
      bins.push_back({left, origin + HighReal(i + 1, bin_width.digits()) * bin_width, Rational()});
    }
    bins[index].mass += p.mass;
  }
  return bins;
}

inline std::vector<DensityBin> export_density(PgfTable& table, std::size_t n, const HighReal& bin_width) {
  if (bin_width.sign() <= 0) throw std::invalid_argument("export_density: bin width must be positive");
  return export_density(scale(table, n, bin_width.digits()), bin_width);
}

}  // namespace qsa
