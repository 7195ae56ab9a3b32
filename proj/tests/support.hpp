#pragma once

#include <random>

#include "wsg/moments.hpp"
#include "wsg/poly2.hpp"

namespace wsg::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20241017);
  return gen;
}

inline long uniform_int(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

inline double uniform_real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

/// p/q with q in [1, 12], uniformly spread over the open interval (lo, hi).
inline Rational random_rational(long lo, long hi) {
  const long q = uniform_int(1, 12);
  const long p = uniform_int(lo * q + 1, hi * q - 1);
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline Rational small_rational() {
  Rational r(uniform_int(-9, 9), uniform_int(1, 7));
  r.canonicalize();
  return r;
}

/// Dense random polynomial of total degree <= degree with small rational coefficients.
inline QPoly random_poly(unsigned degree) {
  QPoly p;
  for (const Exponent e : graded_lex_monomials(degree)) p.add_term(e, small_rational());
  return p;
}

inline TriangleWeight random_weight() { return {random_rational(-1, 5), random_rational(-1, 5), random_rational(-1, 5)}; }

inline QPoly P(const char* text) { return parse_poly(text); }

}  // namespace wsg::testing
