#include "wsg/moments.hpp"

#include <cmath>
#include <stdexcept>

#include "wsg/linalg.hpp"

namespace wsg {

TriangleWeight::TriangleWeight(Rational alpha, Rational beta, Rational gamma)
    : alpha_(std::move(alpha)), beta_(std::move(beta)), gamma_(std::move(gamma)) {
  const Rational minus_one(-1);
  if (alpha_ <= minus_one || beta_ <= minus_one || gamma_ <= minus_one) {
    throw std::domain_error("triangle weight exponents must be > -1 (got alpha=" + to_string(alpha_) +
                            ", beta=" + to_string(beta_) + ", gamma=" + to_string(gamma_) + ")");
  }
}

bool TriangleWeight::has_rational_moments() const {
  return is_integer(alpha_) && is_integer(beta_) && is_integer(gamma_);
}

double weight_mass(const TriangleWeight& w) {
  const double a = w.alpha().get_d();
  const double b = w.beta().get_d();
  const double c = w.gamma().get_d();
  return std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) + std::lgamma(c + 1.0) - std::lgamma(a + b + c + 3.0));
}

Rational moment_ratio(unsigned m, unsigned n, const TriangleWeight& w) {
  const Rational s = w.sum();
  Rational r(1);
  for (unsigned k = 0; k < m; ++k) r *= (w.alpha() + (k + 1)) / (s + (k + 3));
  for (unsigned l = 0; l < n; ++l) r *= (w.beta() + (l + 1)) / (s + (m + l + 3));
  return r;
}

double dirichlet_moment(unsigned m, unsigned n, const TriangleWeight& w) {
  // The ratio is exact, so the only rounding is in the mass and the final product.
  return weight_mass(w) * moment_ratio(m, n, w).get_d();
}

std::optional<Rational> dirichlet_moment_exact(unsigned m, unsigned n, const TriangleWeight& w) {
  if (!w.has_rational_moments()) return std::nullopt;
  // mu(0,0) = a! b! c! / (a+b+c+2)!
  const unsigned long a = w.alpha().get_num().get_ui();
  const unsigned long b = w.beta().get_num().get_ui();
  const unsigned long c = w.gamma().get_num().get_ui();
  mpz_class fa, fb, fc, fs;
  mpz_fac_ui(fa.get_mpz_t(), a);
  mpz_fac_ui(fb.get_mpz_t(), b);
  mpz_fac_ui(fc.get_mpz_t(), c);
  mpz_fac_ui(fs.get_mpz_t(), a + b + c + 2);
  Rational base(fa * fb * fc, fs);
  base.canonicalize();
  return base * moment_ratio(m, n, w);
}

MomentTable::MomentTable(const TriangleWeight& w, unsigned max_degree)
    : weight_(w), max_degree_(max_degree), mass_(weight_mass(w)) {
  ratios_.resize(static_cast<std::size_t>(max_degree + 1) * (max_degree + 2) / 2);
  const Rational s = w.sum();
  for (unsigned m = 0; m <= max_degree; ++m) {
    ratios_[index(m, 0)] = m == 0 ? Rational(1) : Rational(ratio(m - 1, 0) * (w.alpha() + m) / (s + (m + 2)));
    for (unsigned n = 1; m + n <= max_degree; ++n) {
      ratios_[index(m, n)] = ratio(m, n - 1) * (w.beta() + n) / (s + (m + n + 2));
    }
  }
}

std::size_t MomentTable::index(unsigned m, unsigned n) const {
  if (m + n > max_degree_) throw std::out_of_range("moment index beyond table degree");
  const unsigned d = m + n;
  return static_cast<std::size_t>(d) * (d + 1) / 2 + m;
}

Rational MomentTable::normalized_integral(const QPoly& q) const {
  Rational sum(0);
  for (const auto& [e, c] : q.terms()) sum += c * ratio(e.i, e.j);
  return sum;
}

double MomentTable::integral(const RPoly& q) const {
  double sum = 0.0;
  for (const auto& [e, c] : q.terms()) sum += c * ratio(e.i, e.j).get_d();
  return mass_ * sum;
}

double integrate_poly(const QPoly& q, const TriangleWeight& w) {
  return MomentTable(w, q.degree()).integral(q);
}

double integrate_poly(const RPoly& q, const TriangleWeight& w) {
  return MomentTable(w, q.degree()).integral(q);
}

Rational integrate_poly_normalized(const QPoly& q, const TriangleWeight& w) {
  return MomentTable(w, q.degree()).normalized_integral(q);
}

std::optional<Rational> integrate_poly_exact(const QPoly& q, const TriangleWeight& w) {
  auto base = dirichlet_moment_exact(0, 0, w);
  if (!base) return std::nullopt;
  return *base * integrate_poly_normalized(q, w);
}

Rule1D gauss_jacobi(unsigned n, double a, double b) {
  if (n == 0) throw std::invalid_argument("gauss_jacobi needs at least one node");
  if (!(a > -1.0) || !(b > -1.0)) throw std::domain_error("gauss_jacobi exponents must be > -1");

  // On [-1,1] the weight is (1-t)^b (1+t)^a with x = (1+t)/2.
  const double ja = b;
  const double jb = a;
  const double s = ja + jb;
  SymMatrix jacobi(n);
  for (unsigned k = 0; k < n; ++k) {
    double diag;
    if (k == 0) {
      diag = (jb - ja) / (s + 2.0);
    } else {
      const double t = 2.0 * k + s;
      diag = (jb * jb - ja * ja) / (t * (t + 2.0));
    }
    jacobi.set(k, k, 0.5 * (1.0 + diag));
    if (k + 1 < n) {
      const double m = k + 1.0;
      double beta2;
      if (m == 1.0) {
        beta2 = 4.0 * (1.0 + ja) * (1.0 + jb) / ((2.0 + s) * (2.0 + s) * (3.0 + s));
      } else {
        const double t = 2.0 * m + s;
        beta2 = 4.0 * m * (m + ja) * (m + jb) * (m + s) / (t * t * (t + 1.0) * (t - 1.0));
      }
      jacobi.set(k, k + 1, 0.5 * std::sqrt(beta2));
    }
  }

  const double mu0 = std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
  const SymEigen eig = sym_eig(jacobi, JacobiOptions{1e-15, 64});
  Rule1D rule;
  rule.nodes = eig.values;
  rule.weights.resize(n);
  for (unsigned k = 0; k < n; ++k) rule.weights[k] = mu0 * eig.vectors(0, k) * eig.vectors(0, k);
  return rule;
}

QuadratureRule triangle_rule(unsigned n, const TriangleWeight& w) {
  const double a = w.alpha().get_d();
  const double b = w.beta().get_d();
  const double c = w.gamma().get_d();
  const Rule1D ru = gauss_jacobi(n, a, b + c + 1.0);
  const Rule1D rv = gauss_jacobi(n, b, c);
  QuadratureRule rule;
  rule.exactness_degree = n - 1;
  rule.nodes.reserve(static_cast<std::size_t>(n) * n);
  rule.weights.reserve(static_cast<std::size_t>(n) * n);
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = 0; j < n; ++j) {
      const double u = ru.nodes[i];
      const double v = rv.nodes[j];
      rule.nodes.emplace_back(u, (1.0 - u) * v);
      rule.weights.push_back(ru.weights[i] * rv.weights[j]);
    }
  }
  return rule;
}

}  // namespace wsg
