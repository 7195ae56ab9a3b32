#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace wsg {

/// Exact rational scalar (GMP). All symbolic identities are checked in this type.
using Rational = mpq_class;

/// Parses "7/3", "-2", "0.125", "1.5e-3". Decimals are converted exactly.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// "7/3" or "-2"; the canonical form parse_rational reads back.
std::string to_string(const Rational& q);

/// Exact conversion of a finite double (every double is a dyadic rational).
Rational rational_from_double(double v);

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double v) { return v; }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// Shortest text that round-trips the double.
std::string format_double(double v);

// Coefficient-domain hooks used by the polynomial templates.

inline bool is_zero(const Rational& c) { return sgn(c) == 0; }
inline bool is_zero(double c) { return c == 0.0; }

inline double magnitude(const Rational& c) { return std::abs(c.get_d()); }
inline double magnitude(double c) { return std::abs(c); }

template <class C>
C coefficient_from(const Rational& q);

template <>
inline Rational coefficient_from<Rational>(const Rational& q) {
  return q;
}

template <>
inline double coefficient_from<double>(const Rational& q) {
  return q.get_d();
}

inline std::string coefficient_text(const Rational& c) { return to_string(c); }
inline std::string coefficient_text(double c) { return format_double(c); }

}  // namespace wsg
