#pragma once

#include <map>
#include <stdexcept>

#include <mpfr.h>

#include "qsa/high_real.hpp"

namespace qsa {

/// Euler's constant, pi and zeta(2..max_zeta) at a common precision.
struct Constants {
  HighReal gamma;
  HighReal pi;
  std::map<unsigned, HighReal> zeta;

  const HighReal& zeta_at(unsigned m) const {
    auto it = zeta.find(m);
    if (it == zeta.end()) throw std::out_of_range("Constants: zeta(" + std::to_string(m) + ") not tabulated");
    return it->second;
  }
};

inline HighReal euler_gamma(unsigned digits) {
  HighReal r(digits);
  mpfr_const_euler(r.raw(), MPFR_RNDN);
  return r;
}

inline HighReal pi(unsigned digits) {
  HighReal r(digits);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

inline HighReal zeta(unsigned m, unsigned digits) {
  if (m < 2) throw std::invalid_argument("zeta: argument must be at least 2");
  HighReal r(digits);
  mpfr_zeta_ui(r.raw(), m, MPFR_RNDN);
  return r;
}

inline HighReal ln2(unsigned digits) {
  HighReal r(digits);
  mpfr_const_log2(r.raw(), MPFR_RNDN);
  return r;
}

inline Constants constants(unsigned precision, unsigned max_zeta = 8) {
  if (precision < kMinDigits) {
    throw std::invalid_argument("constants: precision must be at least " + std::to_string(kMinDigits));
  }
  Constants c{euler_gamma(precision), pi(precision), {}};
  for (unsigned m = 2; m <= max_zeta; ++m) c.zeta.emplace(m, zeta(m, precision));
  return c;
}

}  // namespace qsa
