#pragma once

// JSON and CSV encodings for the exported types.

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsa/asymptotics.hpp"
#include "qsa/closed_form.hpp"
#include "qsa/distribution.hpp"
#include "qsa/exact_pgf.hpp"
#include "qsa/high_real.hpp"
#include "qsa/moments.hpp"
#include "qsa/rational.hpp"
#include "qsa/simulator.hpp"

namespace qsa {

using json = nlohmann::json;

// {"num": "-3", "den": "4"}
inline void to_json(json& j, const Rational& r) {
  j = json{{"num", r.numerator().get_str()}, {"den", r.denominator().get_str()}};
}

inline void from_json(const json& j, Rational& r) {
  r = Rational(mpz_class(j.at("num").get<std::string>()), mpz_class(j.at("den").get<std::string>()));
}

// {"value": "1.2020...e+00", "precision": 50}
inline void to_json(json& j, const HighReal& x) { j = json{{"value", x.str()}, {"precision", x.digits()}}; }

inline void from_json(const json& j, HighReal& x) {
  x = HighReal::parse(j.at("value").get<std::string>(), j.at("precision").get<unsigned>());
}

inline json distpoly_json(const DistPoly& g) {
  json coeffs = json::array();
  for (std::uint64_t k = g.min_k(); k <= g.max_k(); ++k) {
    const Rational p = g.probability(k);
    coeffs.push_back(json::array({k, p.numerator().get_str(), p.denominator().get_str()}));
  }
  return json{{"n", g.n()}, {"coeffs", std::move(coeffs)}};
}

/// Rows `k,num,den` in increasing k.
template <typename Map>
void write_distribution_csv(std::ostream& os, const Map& probabilities) {
  for (const auto& [k, p] : probabilities) os << k << ',' << p.numerator().get_str() << ',' << p.denominator().get_str() << '\n';
}

inline void write_distribution_csv(std::ostream& os, const DistPoly& g) {
  for (std::uint64_t k = g.min_k(); k <= g.max_k(); ++k) {
    const Rational p = g.probability(k);
    os << k << ',' << p.numerator().get_str() << ',' << p.denominator().get_str() << '\n';
  }
}

inline void to_json(json& j, const Monomial& m) {
  json h = json::array();
  for (unsigned order = 1; order <= m.max_order(); ++order) {
    if (const unsigned b = m.h_power(order)) h.push_back(json::array({order, b}));
  }
  j = json{{"n_pow", m.n_power()}, {"h_pows", std::move(h)}};
}

inline void from_json(const json& j, Monomial& m) {
  std::vector<unsigned> h;
  for (const auto& pair : j.at("h_pows")) {
    const auto order = pair.at(0).get<unsigned>();
    const auto exponent = pair.at(1).get<unsigned>();
    if (order < 1) throw std::invalid_argument("Monomial JSON: harmonic order must be positive");
    if (h.size() < order) h.resize(order, 0);
    h[order - 1] += exponent;
  }
  m = Monomial(j.at("n_pow").get<unsigned>(), std::move(h));
}

// [{"n_pow": a, "h_pows": [[m, b], ...], "coeff": {"num": ..., "den": ...}}, ...] in canonical order
inline void to_json(json& j, const HarmonicExpr& e) {
  j = json::array();
  for (const auto& [m, c] : e.terms()) {
    json term = m;
    term["coeff"] = c;
    j.push_back(std::move(term));
  }
}

inline void from_json(const json& j, HarmonicExpr& e) {
  e = HarmonicExpr();
  for (const auto& term : j) e.add(term.get<Monomial>(), term.at("coeff").get<Rational>());
}

inline void to_json(json& j, const FitReport& r) {
  j = json{{"status", to_string(r.status)},
           {"train", r.train.str()},
           {"test", r.test.str()},
           {"unknowns", r.unknowns},
           {"rank", r.rank},
           {"template_degree", r.template_degree},
           {"expr", r.expr},
           {"residuals", r.residuals}};
}

inline void to_json(json& j, const EmpiricalStats& s) {
  j = json{{"trials", s.trials}, {"mean", s.mean},         {"variance", s.variance},
           {"skewness", s.skewness}, {"min", s.min}, {"max", s.max}};
}

/// Rows `n,r,num,den`.
inline void write_moments_csv(std::ostream& os, const std::vector<MomentTable>& tables) {
  if (tables.empty()) return;
  for (const auto& [n, unused] : tables.front().values) {
    for (const auto& t : tables) {
      const Rational& v = t.values.at(n);
      os << n << ',' << t.r << ',' << v.numerator().get_str() << ',' << v.denominator().get_str() << '\n';
    }
  }
}

inline json moments_json(const std::vector<MomentTable>& tables) {
  json out = json::array();
  if (tables.empty()) return out;
  for (const auto& [n, unused] : tables.front().values) {
    for (const auto& t : tables) {
      const Rational& v = t.values.at(n);
      out.push_back(json{{"n", n}, {"r", t.r}, {"num", v.numerator().get_str()}, {"den", v.denominator().get_str()}});
    }
  }
  return out;
}

/// Rows `z_left,z_right,mass` with `digits` significant digits.
inline void write_density_csv(std::ostream& os, const std::vector<DensityBin>& bins, unsigned digits = 17) {
  for (const auto& b : bins) {
    os << b.z_left.str(digits) << ',' << b.z_right.str(digits) << ',' << HighReal(b.mass, b.z_left.digits()).str(digits)
       << '\n';
  }
}

}  // namespace qsa
