#pragma once

#include <algorithm>
#include <array>
#include <concepts>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wsg/rational.hpp"

namespace wsg {

enum class Axis { x1 = 1, x2 = 2 };

/// Exponent pair of the monomial x1^i x2^j.
struct Exponent {
  unsigned i = 0;
  unsigned j = 0;

  constexpr unsigned degree() const { return i + j; }
  friend constexpr bool operator==(Exponent, Exponent) = default;
};

/// Graded lexicographic order: total degree first, then the power of x1.
/// Ascending sequence: 1, x2, x1, x2^2, x1 x2, x1^2, ...
struct GradedLex {
  constexpr bool operator()(Exponent a, Exponent b) const {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.i < b.i;
  }
};

/// All exponents of total degree <= degree, in ascending graded-lex order.
std::vector<Exponent> graded_lex_monomials(unsigned degree);

/// Sparse bivariate polynomial. Zero coefficients are never stored; the zero
/// polynomial is the empty term map and reports degree 0.
template <class C>
class BasicPoly2 {
 public:
  using coefficient_type = C;
  using term_map = std::map<Exponent, C, GradedLex>;

  BasicPoly2() = default;
  BasicPoly2(const C& c) { add_term({0, 0}, c); }  // NOLINT(google-explicit-constructor)
  template <std::integral I>
  BasicPoly2(I c) : BasicPoly2(C(static_cast<long>(c))) {}  // NOLINT(google-explicit-constructor)

  static BasicPoly2 monomial(unsigned i, unsigned j, const C& c = C(1)) {
    BasicPoly2 p;
    p.add_term({i, j}, c);
    return p;
  }
  static BasicPoly2 x1() { return monomial(1, 0); }
  static BasicPoly2 x2() { return monomial(0, 1); }

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const term_map& terms() const { return terms_; }

  unsigned degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.degree(); }

  /// Largest exponent under graded-lex; undefined for the zero polynomial.
  std::pair<Exponent, C> leading_term() const { return *terms_.rbegin(); }

  C coeff(unsigned i, unsigned j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? C(0) : it->second;
  }

  void add_term(Exponent e, const C& c) {
    if (wsg::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (wsg::is_zero(it->second)) terms_.erase(it);
    }
  }

  void erase_term(Exponent e) { terms_.erase(e); }

  BasicPoly2& operator+=(const BasicPoly2& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  BasicPoly2& operator-=(const BasicPoly2& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  BasicPoly2& operator*=(const C& s) {
    if (wsg::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend BasicPoly2 operator+(BasicPoly2 a, const BasicPoly2& b) { return a += b; }
  friend BasicPoly2 operator-(BasicPoly2 a, const BasicPoly2& b) { return a -= b; }
  friend BasicPoly2 operator-(BasicPoly2 a) {
    for (auto& [e, c] : a.terms_) c = -c;
    return a;
  }
  friend BasicPoly2 operator*(BasicPoly2 a, const C& s) { return a *= s; }
  friend BasicPoly2 operator*(const C& s, BasicPoly2 a) { return a *= s; }
  template <std::integral I>
  friend BasicPoly2 operator*(BasicPoly2 a, I s) {
    return a *= C(static_cast<long>(s));
  }
  template <std::integral I>
  friend BasicPoly2 operator*(I s, BasicPoly2 a) {
    return a *= C(static_cast<long>(s));
  }

  friend BasicPoly2 operator*(const BasicPoly2& a, const BasicPoly2& b) {
    BasicPoly2 out;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        out.add_term({ea.i + eb.i, ea.j + eb.j}, ca * cb);
      }
    }
    return out;
  }
  BasicPoly2& operator*=(const BasicPoly2& o) { return *this = *this * o; }

  friend bool operator==(const BasicPoly2& a, const BasicPoly2& b) { return a.terms_ == b.terms_; }

  BasicPoly2 derivative(Axis axis) const {
    BasicPoly2 out;
    for (const auto& [e, c] : terms_) {
      if (axis == Axis::x1 && e.i > 0) {
        out.add_term({e.i - 1, e.j}, c * C(static_cast<long>(e.i)));
      } else if (axis == Axis::x2 && e.j > 0) {
        out.add_term({e.i, e.j - 1}, c * C(static_cast<long>(e.j)));
      }
    }
    return out;
  }

  /// Evaluates in the scalar type T; exact when T = Rational.
  template <class T>
  T eval(const T& x1v, const T& x2v) const {
    if (terms_.empty()) return T(0);
    const unsigned d = degree();
    std::vector<T> p1(d + 1, T(1)), p2(d + 1, T(1));
    for (unsigned k = 1; k <= d; ++k) {
      p1[k] = p1[k - 1] * x1v;
      p2[k] = p2[k - 1] * x2v;
    }
    T sum(0);
    for (const auto& [e, c] : terms_) sum += convert<T>(c) * p1[e.i] * p2[e.j];
    return sum;
  }

  double operator()(double x1v, double x2v) const { return eval<double>(x1v, x2v); }

  /// Largest coefficient magnitude; the scale used by tolerant division.
  double max_magnitude() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, magnitude(c));
    return m;
  }

  template <class D, class F>
  BasicPoly2<D> transform_coefficients(F&& f) const {
    BasicPoly2<D> out;
    for (const auto& [e, c] : terms_) out.add_term(e, f(c));
    return out;
  }

 private:
  template <class T>
  static T convert(const C& c) {
    if constexpr (std::is_same_v<T, C>) {
      return c;
    } else {
      return T(to_double(c));
    }
  }

  term_map terms_;
};

using QPoly = BasicPoly2<Rational>;
using RPoly = BasicPoly2<double>;

inline RPoly to_floating(const QPoly& p) {
  return p.transform_coefficients<double>([](const Rational& c) { return c.get_d(); });
}

template <class C>
BasicPoly2<C> derivative(const BasicPoly2<C>& p, Axis axis) {
  return p.derivative(axis);
}

/// Returns q with p = q*d, or nullopt when d does not divide p.
///
/// Division runs by elimination of graded-lex leading terms; it is exact for
/// any nonzero divisor. With tolerance > 0 (floating coefficients) remainder
/// terms below tolerance * max|p| are discarded instead of rejecting.
template <class C>
std::optional<BasicPoly2<C>> divide_exact(const BasicPoly2<C>& p, const BasicPoly2<C>& d,
                                          double tolerance = 0.0) {
  if (d.is_zero()) return std::nullopt;
  const auto [lead_e, lead_c] = d.leading_term();
  const double drop = tolerance * p.max_magnitude();
  BasicPoly2<C> rem = p;
  BasicPoly2<C> quot;
  while (!rem.is_zero()) {
    const auto [e, c] = rem.leading_term();
    if (tolerance > 0.0 && magnitude(c) <= drop) {
      rem.erase_term(e);
      continue;
    }
    if (e.i < lead_e.i || e.j < lead_e.j) return std::nullopt;
    const C factor = c / lead_c;
    const auto t = BasicPoly2<C>::monomial(e.i - lead_e.i, e.j - lead_e.j, factor);
    quot += t;
    rem -= t * d;
    rem.erase_term(e);
  }
  return quot;
}

/// Polynomial text: sums/products of rational or decimal constants, x1, x2,
/// parentheses and nonnegative integer powers, e.g. "x1*(1-x1)" or "7/3*x1^2*x2".
/// Throws std::invalid_argument with the offending position.
QPoly parse_poly(std::string_view text);

/// Expanded form "c*x1^i*x2^j + ..." in ascending graded-lex order; "0" for zero.
/// parse_poly(to_string(p)) == p.
std::string to_string(const QPoly& p);
std::string to_string(const RPoly& p);

/// 2x2 matrix of polynomials. The classical-weight machinery requires it symmetric.
template <class C>
struct BasicMatPoly2 {
  using poly_type = BasicPoly2<C>;
  std::array<std::array<poly_type, 2>, 2> entries{};

  BasicMatPoly2() = default;
  BasicMatPoly2(poly_type a11, poly_type a12, poly_type a21, poly_type a22)
      : entries{{{std::move(a11), std::move(a12)}, {std::move(a21), std::move(a22)}}} {}

  static BasicMatPoly2 symmetric(const poly_type& a11, const poly_type& a12, const poly_type& a22) {
    return BasicMatPoly2(a11, a12, a12, a22);
  }
  static BasicMatPoly2 identity() { return BasicMatPoly2(C(1), C(0), C(0), C(1)); }

  poly_type& operator()(int r, int c) { return entries[r][c]; }
  const poly_type& operator()(int r, int c) const { return entries[r][c]; }

  bool is_symmetric() const { return entries[0][1] == entries[1][0]; }
  bool is_zero() const {
    for (const auto& row : entries)
      for (const auto& e : row)
        if (!e.is_zero()) return false;
    return true;
  }

  unsigned max_degree() const {
    unsigned d = 0;
    for (const auto& row : entries)
      for (const auto& e : row) d = std::max(d, e.degree());
    return d;
  }

  BasicMatPoly2 derivative(Axis axis) const {
    BasicMatPoly2 out;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) out(r, c) = entries[r][c].derivative(axis);
    return out;
  }

  friend BasicMatPoly2 operator*(const BasicMatPoly2& a, const BasicMatPoly2& b) {
    BasicMatPoly2 out;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c);
    return out;
  }
  friend BasicMatPoly2 operator+(const BasicMatPoly2& a, const BasicMatPoly2& b) {
    BasicMatPoly2 out;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) out(r, c) = a(r, c) + b(r, c);
    return out;
  }
  friend BasicMatPoly2 operator-(const BasicMatPoly2& a, const BasicMatPoly2& b) {
    BasicMatPoly2 out;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) out(r, c) = a(r, c) - b(r, c);
    return out;
  }
  /// Scales every entry by the polynomial p.
  friend BasicMatPoly2 operator*(const poly_type& p, const BasicMatPoly2& m) {
    BasicMatPoly2 out;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) out(r, c) = p * m(r, c);
    return out;
  }
  friend bool operator==(const BasicMatPoly2& a, const BasicMatPoly2& b) { return a.entries == b.entries; }

  /// Matrix-vector product with a polynomial column vector.
  std::array<poly_type, 2> apply(const std::array<poly_type, 2>& v) const {
    return {entries[0][0] * v[0] + entries[0][1] * v[1], entries[1][0] * v[0] + entries[1][1] * v[1]};
  }
};

using QMatPoly2 = BasicMatPoly2<Rational>;
using RMatPoly2 = BasicMatPoly2<double>;

template <class C>
using PolyVec2 = std::array<BasicPoly2<C>, 2>;

template <class C>
PolyVec2<C> gradient(const BasicPoly2<C>& p) {
  return {p.derivative(Axis::x1), p.derivative(Axis::x2)};
}

/// u^T Phi v for polynomial vectors.
template <class C>
BasicPoly2<C> quadratic_form(const PolyVec2<C>& u, const BasicMatPoly2<C>& phi, const PolyVec2<C>& v) {
  const auto pv = phi.apply(v);
  return u[0] * pv[0] + u[1] * pv[1];
}

inline RMatPoly2 to_floating(const QMatPoly2& m) {
  return RMatPoly2(to_floating(m(0, 0)), to_floating(m(0, 1)), to_floating(m(1, 0)), to_floating(m(1, 1)));
}

}  // namespace wsg
