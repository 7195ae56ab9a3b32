#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "wsg/poly2.hpp"
#include "wsg/rational.hpp"

namespace wsg {

/// Exponents of the Jacobi weight x1^alpha x2^beta (1-x1-x2)^gamma on the unit
/// triangle. Kept exact so moment ratios stay rational.
class TriangleWeight {
 public:
  /// Throws std::domain_error unless every exponent is > -1.
  TriangleWeight(Rational alpha, Rational beta, Rational gamma);
  TriangleWeight() : TriangleWeight(0, 0, 0) {}

  const Rational& alpha() const { return alpha_; }
  const Rational& beta() const { return beta_; }
  const Rational& gamma() const { return gamma_; }
  Rational sum() const { return alpha_ + beta_ + gamma_; }

  /// Nonnegative integer exponents make every moment rational.
  bool has_rational_moments() const;

  friend bool operator==(const TriangleWeight&, const TriangleWeight&) = default;

 private:
  Rational alpha_, beta_, gamma_;
};

/// mu(0,0) = Gamma(a+1)Gamma(b+1)Gamma(c+1)/Gamma(a+b+c+3), through one
/// exponentiated log-Gamma difference.
double weight_mass(const TriangleWeight& w);

/// mu(m,n)/mu(0,0), exact, via
///   mu(m+1,n) = mu(m,n) (alpha+m+1)/(s+m+n+3),
///   mu(m,n+1) = mu(m,n) (beta+n+1)/(s+m+n+3),  s = alpha+beta+gamma.
Rational moment_ratio(unsigned m, unsigned n, const TriangleWeight& w);

/// mu(m,n) = integral of x1^m x2^n rho over the triangle.
double dirichlet_moment(unsigned m, unsigned n, const TriangleWeight& w);

/// Exact mu(m,n); only available when has_rational_moments().
std::optional<Rational> dirichlet_moment_exact(unsigned m, unsigned n, const TriangleWeight& w);

/// Table of exact ratios and double moments for all m+n <= max_degree.
/// Immutable after construction.
class MomentTable {
 public:
  MomentTable(const TriangleWeight& w, unsigned max_degree);

  unsigned max_degree() const { return max_degree_; }
  const TriangleWeight& weight() const { return weight_; }
  double mass() const { return mass_; }

  const Rational& ratio(unsigned m, unsigned n) const { return ratios_.at(index(m, n)); }
  double operator()(unsigned m, unsigned n) const { return mass_ * ratio(m, n).get_d(); }

  /// integral q rho / integral rho, exact.
  Rational normalized_integral(const QPoly& q) const;
  /// integral q rho, rounded once at the end.
  double integral(const QPoly& q) const { return mass_ * normalized_integral(q).get_d(); }
  /// integral q rho for floating coefficients.
  double integral(const RPoly& q) const;

 private:
  std::size_t index(unsigned m, unsigned n) const;

  TriangleWeight weight_;
  unsigned max_degree_;
  double mass_;
  std::vector<Rational> ratios_;
};

double integrate_poly(const QPoly& q, const TriangleWeight& w);
double integrate_poly(const RPoly& q, const TriangleWeight& w);
Rational integrate_poly_normalized(const QPoly& q, const TriangleWeight& w);
/// Exact integral when the weight has rational moments, otherwise nullopt.
std::optional<Rational> integrate_poly_exact(const QPoly& q, const TriangleWeight& w);

/// One-dimensional rule on [0,1] for the weight x^a (1-x)^b.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Golub-Welsch: eigen-decomposition of the Jacobi recurrence matrix, mapped
/// from [-1,1] to [0,1]. Exact through degree 2n-1. Throws std::domain_error
/// for a <= -1 or b <= -1 and std::invalid_argument for n == 0.
Rule1D gauss_jacobi(unsigned n, double a, double b);

struct QuadratureRule {
  std::vector<std::pair<double, double>> nodes;
  std::vector<double> weights;
  unsigned exactness_degree = 0;

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * f(nodes[k].first, nodes[k].second);
    return sum;
  }
};

/// Collapsed (Duffy) rule x1 = u, x2 = (1-u) v: tensor product of
/// gauss_jacobi(n, alpha, beta+gamma+1) in u and gauss_jacobi(n, beta, gamma) in v.
/// exactness_degree is reported as n-1, the guaranteed total degree.
QuadratureRule triangle_rule(unsigned n, const TriangleWeight& w);

}  // namespace wsg
