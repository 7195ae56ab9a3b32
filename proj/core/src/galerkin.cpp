#include "wsg/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

namespace wsg {

namespace {

QMatrix normalized_gram(const std::vector<Exponent>& mons, const MomentTable& table) {
  const std::size_t n = mons.size();
  QMatrix g(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      g(a, b) = table.ratio(mons[a].i + mons[b].i, mons[a].j + mons[b].j);
      g(b, a) = g(a, b);
    }
  return g;
}

struct MonomialForms {
  QMatrix mass, stiffness, potential;
};

// All three weak-form matrices over raw monomials, divided by int rho.
MonomialForms monomial_forms(const std::vector<Exponent>& mons, const QMatPoly2& phi, const MomentTable& table) {
  const std::size_t n = mons.size();
  std::vector<PolyVec2<Rational>> grads;
  grads.reserve(n);
  for (const auto& e : mons) grads.push_back(gradient(QPoly::monomial(e.i, e.j)));

  MonomialForms f{normalized_gram(mons, table), QMatrix(n, n), QMatrix(n, n)};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      const QPoly q = quadratic_form(grads[a], phi, grads[b]);
      f.stiffness(a, b) = table.normalized_integral(q);
      f.stiffness(b, a) = f.stiffness(a, b);
      const unsigned i = mons[a].i + mons[b].i;
      const unsigned j = mons[a].j + mons[b].j;
      f.potential(a, b) = 2 * table.ratio(i, j) + table.ratio(i + 2, j) + table.ratio(i, j + 2);
      f.potential(b, a) = f.potential(a, b);
    }
  return f;
}

unsigned table_degree(unsigned degree, const QMatPoly2& phi) {
  return 2 * degree + std::max(2u, phi.max_degree());
}

SymMatrix scaled(const QMatrix& m, const std::vector<double>& s) {
  SymMatrix out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) out.set(i, j, m(i, j).get_d() * s[i] * s[j]);
  return out;
}

SymMatrix to_sym(const Matrix& m, double factor) {
  SymMatrix out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) out.set(i, j, factor * m(i, j));
  return out;
}

Matrix to_double(const QMatrix& q) {
  Matrix m(q.rows(), q.cols());
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j) m(i, j) = q(i, j).get_d();
  return m;
}

std::vector<double> inverse_root_norms(const BasisSet& b) {
  std::vector<double> s(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) s[k] = 1.0 / std::sqrt(b.norms[k].get_d());
  return s;
}

Matrix factor_or_fail(const SymMatrix& a, const char* what) {
  try {
    return cholesky(a);
  } catch (const NotSpdError& e) {
    throw FactorizationFailure(std::string(what) + ": " + e.what(), e.pivot);
  }
}

}  // namespace

QPoly BasisSet::orthogonal_polynomial(std::size_t k) const {
  if (arithmetic != Arithmetic::exact) throw std::logic_error("exact basis data requires Arithmetic::exact");
  QPoly p;
  for (std::size_t j = 0; j <= k; ++j) p.add_term(monomials[j], orthogonal(k, j));
  return p;
}

RPoly BasisSet::expand(std::span<const double> coefficients) const {
  if (coefficients.size() != size()) throw std::invalid_argument("coefficient vector has the wrong length");
  RPoly out;
  for (std::size_t j = 0; j < size(); ++j) {
    double a = 0.0;
    for (std::size_t k = j; k < size(); ++k) a += transform(k, j) * coefficients[k];
    out.add_term(monomials[j], a);
  }
  return out;
}

BasisSet build_basis(unsigned degree, const TriangleWeight& w, Arithmetic arithmetic) {
  BasisSet b;
  b.degree = degree;
  b.weight = w;
  b.arithmetic = arithmetic;
  b.monomials = graded_lex_monomials(degree);
  const std::size_t n = b.monomials.size();
  const MomentTable table(w, 2 * degree);
  b.mass = table.mass();

  if (arithmetic == Arithmetic::exact) {
    Ldlt f;
    try {
      f = ldlt(normalized_gram(b.monomials, table));
    } catch (const NotSpdError& e) {
      throw FactorizationFailure(std::string("monomial Gram matrix: ") + e.what(), e.pivot);
    }
    b.orthogonal = unit_lower_inverse(f.unit_lower);
    b.norms = std::move(f.diagonal);
    b.transform = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      const double s = 1.0 / std::sqrt(b.mass * b.norms[k].get_d());
      for (std::size_t j = 0; j <= k; ++j) b.transform(k, j) = b.orthogonal(k, j).get_d() * s;
    }
  } else {
    SymMatrix g(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t c = a; c < n; ++c)
        g.set(a, c, table(b.monomials[a].i + b.monomials[c].i, b.monomials[a].j + b.monomials[c].j));
    b.transform = lower_inverse(factor_or_fail(g, "monomial Gram matrix"));
  }

  b.functions.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j <= k; ++j) b.functions[k].add_term(b.monomials[j], b.transform(k, j));
  return b;
}

QPoly helmholtz_potential() {
  return QPoly(2) + QPoly::monomial(2, 0) + QPoly::monomial(0, 2);
}

SymMatrix GramSet::operator_matrix() const {
  SymMatrix a(stiffness.order());
  for (std::size_t i = 0; i < a.order(); ++i)
    for (std::size_t j = i; j < a.order(); ++j) a.set(i, j, stiffness(i, j) + potential(i, j));
  return a;
}

GramSet assemble(const BasisSet& basis, const QMatPoly2& phi, const TriangleWeight& w) {
  if (!(basis.weight == w)) throw std::invalid_argument("assemble: basis was built for a different weight");
  if (!phi.is_symmetric()) throw std::invalid_argument("assemble: Phi must be symmetric");
  const MomentTable table(w, table_degree(basis.degree, phi));
  const MonomialForms forms = monomial_forms(basis.monomials, phi, table);

  if (basis.arithmetic == Arithmetic::exact) {
    const auto s = inverse_root_norms(basis);
    return GramSet{scaled(lower_congruence(basis.orthogonal, forms.mass), s),
                   scaled(lower_congruence(basis.orthogonal, forms.stiffness), s),
                   scaled(lower_congruence(basis.orthogonal, forms.potential), s)};
  }
  const double mass = table.mass();
  return GramSet{to_sym(lower_congruence(basis.transform, to_double(forms.mass)), mass),
                 to_sym(lower_congruence(basis.transform, to_double(forms.stiffness)), mass),
                 to_sym(lower_congruence(basis.transform, to_double(forms.potential)), mass)};
}

GramSet assemble_monomial(unsigned degree, const QMatPoly2& phi, const TriangleWeight& w) {
  const auto mons = graded_lex_monomials(degree);
  const MomentTable table(w, table_degree(degree, phi));
  const MonomialForms forms = monomial_forms(mons, phi, table);
  const double mass = table.mass();
  return GramSet{to_sym(to_double(forms.mass), mass), to_sym(to_double(forms.stiffness), mass),
                 to_sym(to_double(forms.potential), mass)};
}

Rational bilinear_form_normalized(const QPoly& u, const QPoly& v, const QMatPoly2& phi, const TriangleWeight& w) {
  const QPoly integrand = quadratic_form(gradient(v), phi, gradient(u)) + helmholtz_potential() * u * v;
  return integrate_poly_normalized(integrand, w);
}

double bilinear_form(const QPoly& u, const QPoly& v, const QMatPoly2& phi, const TriangleWeight& w) {
  return weight_mass(w) * bilinear_form_normalized(u, v, phi, w).get_d();
}

double sobolev_norm(const QPoly& u, const QMatPoly2& phi, const TriangleWeight& w) {
  const auto g = gradient(u);
  const QPoly integrand = u * u + quadratic_form(g, phi, g);
  return std::sqrt(integrate_poly(integrand, w));
}

QPoly apply_L(const QPoly& u, const TriangleWeight& w) {
  const QPoly x1 = QPoly::x1();
  const QPoly x2 = QPoly::x2();
  const QPoly one(1);
  const Rational s3 = w.sum() + 3;
  const QPoly psi1 = QPoly(Rational(w.alpha() + 1)) - x1 * s3;
  const QPoly psi2 = QPoly(Rational(w.beta() + 1)) - x2 * s3;
  const QPoly u1 = u.derivative(Axis::x1);
  const QPoly u2 = u.derivative(Axis::x2);
  return -(x1 * (one - x1) * u1.derivative(Axis::x1)) + 2 * (x1 * x2 * u1.derivative(Axis::x2)) -
         x2 * (one - x2) * u2.derivative(Axis::x2) - psi1 * u1 - psi2 * u2 + helmholtz_potential() * u;
}

namespace {

WeakSolution solve_with_rhs(BasisSet basis, const std::vector<double>& rhs, const TriangleWeight& w) {
  const GramSet gram = assemble(basis, triangle_phi(), w);
  const Matrix l = factor_or_fail(gram.operator_matrix(), "weak-form operator S+V");
  WeakSolution out{std::move(basis), cholesky_solve(l, rhs), {}};
  out.solution = out.basis.expand(out.coefficients);
  return out;
}

}  // namespace

WeakSolution solve_weak(const QPoly& f, unsigned degree, const TriangleWeight& w) {
  BasisSet basis = build_basis(degree, w);
  const MomentTable table(w, degree + f.degree());
  const std::size_t n = basis.size();
  std::vector<Rational> mono(n);
  for (std::size_t j = 0; j < n; ++j) {
    mono[j] = table.normalized_integral(f * QPoly::monomial(basis.monomials[j].i, basis.monomials[j].j));
  }
  std::vector<double> rhs(n);
  for (std::size_t k = 0; k < n; ++k) {
    Rational acc(0);
    for (std::size_t j = 0; j <= k; ++j) acc += basis.orthogonal(k, j) * mono[j];
    // <f, b_k> = mass * acc / sqrt(mass * norm_k)
    rhs[k] = acc.get_d() * std::sqrt(basis.mass / basis.norms[k].get_d());
  }
  return solve_with_rhs(std::move(basis), rhs, w);
}

WeakSolution solve_weak(const std::function<double(double, double)>& f, unsigned degree, const TriangleWeight& w) {
  BasisSet basis = build_basis(degree, w);
  const QuadratureRule rule = triangle_rule(degree + 4, w);
  std::vector<double> rhs(basis.size(), 0.0);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const auto [x1, x2] = rule.nodes[q];
    const double fw = rule.weights[q] * f(x1, x2);
    for (std::size_t k = 0; k < basis.size(); ++k) rhs[k] += fw * basis.functions[k](x1, x2);
  }
  return solve_with_rhs(std::move(basis), rhs, w);
}

std::vector<double> EigResult::inverse_values() const {
  std::vector<double> mu(values.size());
  std::transform(values.begin(), values.end(), mu.begin(), [](double v) { return 1.0 / v; });
  return mu;
}

EigResult solve_eig(const GramSet& gram, unsigned degree, EigPath path) {
  if (path == EigPath::automatic) {
    const Matrix& m = gram.mass.dense();
    double dev = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) dev = std::max(dev, std::abs(m(i, j) - (i == j ? 1.0 : 0.0)));
    path = dev <= 1e-12 ? EigPath::standard : EigPath::generalized;
  }
  SymEigen eig;
  if (path == EigPath::standard) {
    eig = sym_eig(gram.operator_matrix());
  } else {
    try {
      eig = generalized_sym_eig(gram.operator_matrix(), gram.mass);
    } catch (const NotSpdError& e) {
      throw FactorizationFailure(std::string("mass matrix: ") + e.what(), e.pivot);
    }
  }
  return EigResult{std::move(eig.values), std::move(eig.vectors), degree};
}

EigResult solve_eig(unsigned degree, const TriangleWeight& w) {
  const BasisSet basis = build_basis(degree, w);
  return solve_eig(assemble(basis, triangle_phi(), w), degree, EigPath::standard);
}

EigDiagnostics diagnose(const GramSet& gram, const EigResult& eig) {
  EigDiagnostics d;
  d.orthogonality_defect = orthonormality_defect(eig.vectors, gram.mass);
  const Matrix a = gram.operator_matrix().dense();
  const Matrix& m = gram.mass.dense();
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    double res = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      for (std::size_t j = 0; j < n; ++j) r += (a(i, j) - eig.values[k] * m(i, j)) * eig.vectors(j, k);
      res += r * r;
      norm += eig.vectors(i, k) * eig.vectors(i, k);
    }
    d.max_residual = std::max(d.max_residual, std::sqrt(res / norm));
  }
  return d;
}

std::vector<ConvergenceRow> convergence_study(unsigned min_degree, unsigned max_degree, const TriangleWeight& w,
                                              std::size_t count, unsigned threads) {
  if (min_degree > max_degree) throw std::invalid_argument("convergence_study: empty degree range");
  auto row_for = [&w, count](unsigned degree) {
    const BasisSet basis = build_basis(degree, w);
    const GramSet gram = assemble(basis, triangle_phi(), w);
    const EigResult eig = solve_eig(gram, degree, EigPath::standard);
    ConvergenceRow row;
    row.degree = degree;
    row.values.assign(eig.values.begin(), eig.values.begin() + std::min(count, eig.values.size()));
    row.orthogonality_defect = diagnose(gram, eig).orthogonality_defect;
    row.bound_margin = eig.values.front() - 2.0;
    return row;
  };

  std::vector<ConvergenceRow> rows;
  if (threads <= 1) {
    for (unsigned d = min_degree; d <= max_degree; ++d) rows.push_back(row_for(d));
    return rows;
  }
  std::vector<std::future<ConvergenceRow>> pending;
  for (unsigned d = min_degree; d <= max_degree; ++d) {
    pending.push_back(std::async(std::launch::async, row_for, d));
    if (pending.size() == threads || d == max_degree) {
      for (auto& f : pending) rows.push_back(f.get());
      pending.clear();
    }
  }
  return rows;
}

}  // namespace wsg
