#include "wsg/weight.hpp"

#include <cmath>
#include <stdexcept>

namespace wsg {

template <class C>
BasicPoly2<C> WeightSpec<C>::denominator() const {
  BasicPoly2<C> d(1);
  for (const auto& f : factors) d = d * f.form;
  return d;
}

template <class C>
BasicPoly2<C> WeightSpec<C>::cofactor(std::size_t i) const {
  BasicPoly2<C> d(1);
  for (std::size_t k = 0; k < factors.size(); ++k)
    if (k != i) d = d * factors[k].form;
  return d;
}

QWeightSpec triangle_weight_spec(const TriangleWeight& w) {
  const QPoly x1 = QPoly::x1();
  const QPoly x2 = QPoly::x2();
  return QWeightSpec{{{x1, w.alpha()}, {x2, w.beta()}, {QPoly(1) - x1 - x2, w.gamma()}}};
}

RWeightSpec to_floating(const QWeightSpec& w) {
  RWeightSpec out;
  for (const auto& f : w.factors) out.factors.push_back({to_floating(f.form), f.exponent.get_d()});
  return out;
}

QMatPoly2 triangle_phi() {
  const QPoly x1 = QPoly::x1();
  const QPoly x2 = QPoly::x2();
  return QMatPoly2::symmetric(x1 * (QPoly(1) - x1), -(x1 * x2), x2 * (QPoly(1) - x2));
}

std::pair<double, double> Edge::unit_normal() const {
  const double x = nx.get_d();
  const double y = ny.get_d();
  const double len = std::hypot(x, y);
  if (len == 0.0) throw std::invalid_argument("edge normal direction is zero");
  return {x / len, y / len};
}

DomainEdges DomainEdges::triangle() {
  const QPoly x1 = QPoly::x1();
  const QPoly x2 = QPoly::x2();
  return DomainEdges{{
      {x1, Rational(-1), Rational(0)},
      {x2, Rational(0), Rational(-1)},
      {QPoly(1) - x1 - x2, Rational(1), Rational(1)},
  }};
}

std::vector<std::pair<Rational, Rational>> DomainEdges::vertices() const {
  std::vector<std::pair<Rational, Rational>> out;
  const std::size_t n = edges.size();
  if (n < 3) throw std::invalid_argument("a polygon needs at least three edges");
  for (std::size_t k = 0; k < n; ++k) {
    const QPoly& p = edges[k].form;
    const QPoly& q = edges[(k + 1) % n].form;
    if (p.degree() != 1 || q.degree() != 1) throw std::invalid_argument("edge forms must be affine");
    // a x1 + b x2 = -c
    const Rational a1 = p.coeff(1, 0), b1 = p.coeff(0, 1), c1 = p.coeff(0, 0);
    const Rational a2 = q.coeff(1, 0), b2 = q.coeff(0, 1), c2 = q.coeff(0, 0);
    const Rational det = a1 * b2 - a2 * b1;
    if (sgn(det) == 0) throw std::invalid_argument("consecutive edges are parallel");
    out.emplace_back(Rational((-c1 * b2 + c2 * b1) / det), Rational((-a1 * c2 + a2 * c1) / det));
  }
  return out;
}

template <class C>
void validate_weight(const WeightSpec<C>& w) {
  if (w.factors.empty()) throw std::invalid_argument("weight has no factors");
  for (std::size_t i = 0; i < w.factors.size(); ++i) {
    const auto& f = w.factors[i];
    if (f.form.degree() != 1) {
      throw std::invalid_argument("weight factor " + std::to_string(i + 1) + " is not of degree 1");
    }
    // Exponents <= -1 are rejected even for factors that never vanish on the domain.
    if (!(f.exponent > C(-1))) {
      throw std::invalid_argument("weight factor " + std::to_string(i + 1) + " has exponent <= -1");
    }
  }
}

template <class C>
void validate_weight_on(const WeightSpec<C>& w, const DomainEdges& domain) {
  validate_weight(w);
  const auto verts = domain.vertices();
  Rational cx(0), cy(0);
  for (const auto& [x, y] : verts) {
    cx += x;
    cy += y;
  }
  cx /= static_cast<long>(verts.size());
  cy /= static_cast<long>(verts.size());
  for (std::size_t i = 0; i < w.factors.size(); ++i) {
    const auto& q = w.factors[i].form;
    auto at = [&](const Rational& x, const Rational& y) {
      if constexpr (std::is_same_v<C, Rational>) {
        return q.template eval<Rational>(x, y);
      } else {
        return q.template eval<double>(x.get_d(), y.get_d());
      }
    };
    bool ok = at(cx, cy) > 0;
    for (const auto& [x, y] : verts) ok = ok && at(x, y) >= 0;
    if (!ok) {
      throw std::invalid_argument("weight factor " + std::to_string(i + 1) + " is not positive on the domain interior");
    }
  }
}

template <class C>
BasicPoly2<C> prune(const BasicPoly2<C>& p, double tolerance) {
  if (tolerance <= 0.0) return p;
  const double cut = tolerance * p.max_magnitude();
  BasicPoly2<C> out;
  for (const auto& [e, c] : p.terms())
    if (magnitude(c) > cut) out.add_term(e, c);
  return out;
}

template <class C>
BasicPoly2<C> cleared_divergence(const PolyVec2<C>& field, const WeightSpec<C>& w) {
  BasicPoly2<C> out = w.denominator() * (field[0].derivative(Axis::x1) + field[1].derivative(Axis::x2));
  for (std::size_t i = 0; i < w.factors.size(); ++i) {
    const auto& f = w.factors[i];
    const BasicPoly2<C> log_numerator =
        field[0] * f.form.derivative(Axis::x1) + field[1] * f.form.derivative(Axis::x2);
    out += (log_numerator * w.cofactor(i)) * f.exponent;
  }
  return out;
}

template <class C>
PearsonOutcome<C> pearson_check(const BasicMatPoly2<C>& phi, const WeightSpec<C>& w, double tolerance) {
  if (!phi.is_symmetric()) throw std::invalid_argument("pearson_check: Phi must be symmetric");
  validate_weight(w);
  const BasicPoly2<C> denom = w.denominator();

  PearsonOutcome<C> out;
  PearsonData<C> data;
  for (int j = 0; j < 2; ++j) {
    const BasicPoly2<C> numerator = cleared_divergence<C>({phi(0, j), phi(1, j)}, w);
    auto quotient = divide_exact(numerator, denom, tolerance);
    if (!quotient) {
      out.failed_stage = PearsonStage::not_divisible;
      out.component = j;
      out.numerator = numerator;
      return out;
    }
    BasicPoly2<C> psi = prune(*quotient, tolerance);
    if (psi.degree() > 1) {
      out.failed_stage = PearsonStage::psi_not_affine;
      out.component = j;
      out.numerator = numerator;
      return out;
    }
    data.directions[j] = {psi.coeff(1, 0), psi.coeff(0, 1)};
    data.constants[j] = psi.coeff(0, 0);
    (j == 0 ? data.psi1 : data.psi2) = std::move(psi);
  }

  const C det = data.det();
  double scale = 0.0;
  for (const auto& d : data.directions)
    for (const auto& v : d) scale = std::max(scale, magnitude(v));
  if (is_zero(det) || magnitude(det) <= tolerance * scale * scale) {
    out.failed_stage = PearsonStage::degenerate_directions;
    out.component = 0;
    return out;
  }
  out.data = std::move(data);
  return out;
}

template <class C>
BoundaryOutcome boundary_check(const BasicMatPoly2<C>& phi, const DomainEdges& domain, double tolerance) {
  BoundaryOutcome out;
  out.edge_pass.assign(domain.edges.size(), true);
  for (std::size_t k = 0; k < domain.edges.size(); ++k) {
    const Edge& edge = domain.edges[k];
    const BasicPoly2<C> form =
        edge.form.transform_coefficients<C>([](const Rational& c) { return coefficient_from<C>(c); });
    const PolyVec2<C> normal{BasicPoly2<C>(coefficient_from<C>(edge.nx)),
                             BasicPoly2<C>(coefficient_from<C>(edge.ny))};
    const PolyVec2<C> flux = phi.apply(normal);
    for (int comp = 0; comp < 2; ++comp) {
      if (!divide_exact(flux[comp], form, tolerance)) {
        out.edge_pass[k] = false;
        if (!out.first_failure) out.first_failure = BoundaryFailure{k, comp};
        break;
      }
    }
  }
  return out;
}

template <class C>
CompatOutcome<C> compat_system_check(const BasicMatPoly2<C>& phi, Orientation orientation, double tolerance) {
  if (!phi.is_symmetric()) throw std::invalid_argument("compat_system_check: Phi must be symmetric");
  const BasicMatPoly2<C> d1 = phi.derivative(Axis::x1);
  const BasicMatPoly2<C> d2 = phi.derivative(Axis::x2);
  double scale = phi.max_degree() == 0 ? 1.0 : 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) scale = std::max(scale, phi(r, c).max_magnitude());

  CompatOutcome<C> out;
  out.pass = true;
  // Pairs (phi11, phi21) and (phi12, phi22): the columns of Phi.
  for (int col = 0; col < 2; ++col) {
    const BasicPoly2<C>& f = phi(0, col);
    const BasicPoly2<C>& g = phi(1, col);
    const BasicMatPoly2<C> lhs = f * d1 + g * d2;
    const BasicMatPoly2<C> jac =
        orientation == Orientation::A
            ? BasicMatPoly2<C>(f.derivative(Axis::x1), g.derivative(Axis::x1), f.derivative(Axis::x2),
                               g.derivative(Axis::x2))
            : BasicMatPoly2<C>(f.derivative(Axis::x1), f.derivative(Axis::x2), g.derivative(Axis::x1),
                               g.derivative(Axis::x2));
    BasicMatPoly2<C> residual = lhs - phi * jac;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        if (tolerance > 0.0) {
          const double cut = tolerance * scale * scale;
          BasicPoly2<C> kept;
          for (const auto& [e, v] : residual(r, c).terms())
            if (magnitude(v) > cut) kept.add_term(e, v);
          residual(r, c) = kept;
        }
        if (!residual(r, c).is_zero()) out.pass = false;
      }
    out.residuals[col] = std::move(residual);
  }
  return out;
}

template <class C>
BasicPoly2<C> divergence_K(const BasicPoly2<C>& v1, const BasicPoly2<C>& v2, const BasicMatPoly2<C>& phi,
                           const PearsonData<C>& psi) {
  return psi.psi1 * v1 + psi.psi2 * v2 + phi(0, 0) * v1.derivative(Axis::x1) + phi(1, 0) * v1.derivative(Axis::x2) +
         phi(0, 1) * v2.derivative(Axis::x1) + phi(1, 1) * v2.derivative(Axis::x2);
}

std::string to_string(PearsonStage stage) {
  switch (stage) {
    case PearsonStage::not_divisible:
      return "not_divisible";
    case PearsonStage::psi_not_affine:
      return "psi_not_affine";
    case PearsonStage::degenerate_directions:
      return "degenerate_directions";
  }
  return "unknown";
}

std::string to_string(Orientation o) { return o == Orientation::A ? "A" : "B"; }

#define WSG_WEIGHT_INSTANTIATE(C)                                                                         \
  template struct WeightSpec<C>;                                                                          \
  template void validate_weight<C>(const WeightSpec<C>&);                                                 \
  template void validate_weight_on<C>(const WeightSpec<C>&, const DomainEdges&);                          \
  template BasicPoly2<C> cleared_divergence<C>(const PolyVec2<C>&, const WeightSpec<C>&);                 \
  template PearsonOutcome<C> pearson_check<C>(const BasicMatPoly2<C>&, const WeightSpec<C>&, double);     \
  template BoundaryOutcome boundary_check<C>(const BasicMatPoly2<C>&, const DomainEdges&, double);        \
  template CompatOutcome<C> compat_system_check<C>(const BasicMatPoly2<C>&, Orientation, double);         \
  template BasicPoly2<C> divergence_K<C>(const BasicPoly2<C>&, const BasicPoly2<C>&,                      \
                                         const BasicMatPoly2<C>&, const PearsonData<C>&);                 \
  template BasicPoly2<C> prune<C>(const BasicPoly2<C>&, double);

WSG_WEIGHT_INSTANTIATE(Rational)
WSG_WEIGHT_INSTANTIATE(double)

}  // namespace wsg
