// Acceptance gate: runs each criterion at its stated tolerance and time budget
// and prints one PASS/FAIL line per criterion. Exit status is nonzero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "support.hpp"
#include "wsg/galerkin.hpp"
#include "wsg/moments.hpp"
#include "wsg/weight.hpp"

using namespace wsg;
using wsg::testing::P;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

QPoly random_poly_upto(unsigned max_degree) {
  return wsg::testing::random_poly(static_cast<unsigned>(wsg::testing::uniform_int(0, max_degree)));
}

Verdict pearson_identity() {
  Verdict v;
  for (int k = 0; k < 20; ++k) {
    const TriangleWeight w = wsg::testing::random_weight();
    const auto out = pearson_check(triangle_phi(), triangle_weight_spec(w));
    v.require(out.ok(), "pearson_check failed");
    if (!out.ok()) return v;
    const Rational s = w.sum() + 3;
    v.require(out.data->psi1 == QPoly(w.alpha() + 1) - QPoly::x1() * s, "psi1 mismatch");
    v.require(out.data->psi2 == QPoly(w.beta() + 1) - QPoly::x2() * s, "psi2 mismatch");
    v.require(out.data->det() == s * s && sgn(out.data->det()) != 0, "det(D1,D2) mismatch");
  }
  return v;
}

Verdict boundary_condition() {
  Verdict v;
  const auto tri = boundary_check(triangle_phi(), DomainEdges::triangle());
  v.require(tri.ok() && tri.edge_pass.size() == 3, "triangle matrix failed an edge");
  const auto id = boundary_check(QMatPoly2::symmetric(QPoly(1), QPoly(), QPoly(1)), DomainEdges::triangle());
  v.require(!id.ok(), "identity matrix passed");
  return v;
}

Verdict green_identity() {
  Verdict v;
  double worst = 0.0;
  for (int a : {0, 1}) {
    const TriangleWeight w(a, a, a);
    const QWeightSpec spec = triangle_weight_spec(w);
    const auto exact_data = *pearson_check(triangle_phi(), spec).data;
    const auto float_out = pearson_check(to_floating(triangle_phi()), to_floating(spec));
    v.require(float_out.ok(), "floating pearson_check failed");
    if (!float_out.ok()) return v;
    for (int k = 0; k < 25; ++k) {
      const QPoly u = random_poly_upto(4), v1 = random_poly_upto(3), v2 = random_poly_upto(3);
      const PolyVec2<Rational> field{v1, v2};
      const QPoly exact = u * divergence_K(v1, v2, triangle_phi(), exact_data) +
                          quadratic_form(gradient(u), triangle_phi(), field);
      v.require(integrate_poly_normalized(exact, w) == 0, "exact residual nonzero");

      const RPoly fu = to_floating(u), f1 = to_floating(v1), f2 = to_floating(v2);
      const RPoly flt = fu * divergence_K(f1, f2, to_floating(triangle_phi()), *float_out.data) +
                        quadratic_form(gradient(fu), to_floating(triangle_phi()), PolyVec2<double>{f1, f2});
      worst = std::max(worst, std::abs(integrate_poly(flt, w)));
    }
  }
  v.require(worst <= 1e-12, "floating residual " + std::to_string(worst));
  return v;
}

Verdict moment_quadrature() {
  Verdict v;
  const TriangleWeight weights[] = {TriangleWeight(), TriangleWeight(Rational(1, 2), Rational(-1, 2), Rational(3, 2)),
                                    TriangleWeight(2, 3, 1)};
  double worst = 0.0;
  for (const auto& w : weights) {
    const QuadratureRule r = triangle_rule(8, w);
    for (const Exponent e : graded_lex_monomials(7)) {
      const double q = r.integrate([&](double x1, double x2) { return std::pow(x1, e.i) * std::pow(x2, e.j); });
      const double m = dirichlet_moment(e.i, e.j, w);
      worst = std::max(worst, std::abs(q - m) / m);
    }
  }
  v.require(worst <= 1e-13, "relative error " + std::to_string(worst));
  return v;
}

Verdict manufactured_solutions() {
  Verdict v;
  double worst = 0.0;
  for (int a : {0, 1}) {
    const TriangleWeight w(a, a, a);
    for (const char* text : {"1", "x1", "x1*x2", "x1^2*x2 - x2^3"}) {
      const QPoly ustar = P(text);
      const unsigned degree = std::max(ustar.degree(), 4u) + 1;
      const WeakSolution sol = solve_weak(apply_L(ustar, w), degree, w);
      for (const Exponent e : graded_lex_monomials(degree))
        worst = std::max(worst, std::abs(sol.solution.coeff(e.i, e.j) - ustar.coeff(e.i, e.j).get_d()));
    }
  }
  v.require(worst <= 1e-8, "max coefficient error " + std::to_string(worst));
  return v;
}

Verdict spectral_structure() {
  Verdict v;
  const TriangleWeight w;
  const auto rows = convergence_study(0, 12, w, basis_dimension(12), 1);
  const auto& d0 = rows[0].values;
  v.require(d0.size() == 1 && std::abs(d0[0] - 7.0 / 3.0) <= 1e-12, "degree-0 value is not 7/3");
  for (std::size_t d = 1; d < rows.size(); ++d)
    v.require(rows[d].values[0] <= rows[d - 1].values[0], "nu0 increased at degree " + std::to_string(d));
  for (unsigned d : {4u, 8u, 12u}) {
    for (double nu : rows[d].values) v.require(nu >= 2.0 - 1e-10, "Ritz value below 2");
    v.require(rows[d].orthogonality_defect <= 1e-10, "M-orthonormality defect at degree " + std::to_string(d));
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < 5; ++k)
    worst = std::max(worst, std::abs(rows[12].values[k] - rows[10].values[k]) / rows[12].values[k]);
  v.require(worst <= 1e-6, "lowest five values moved " + std::to_string(worst));
  return v;
}

Verdict continuity_coercivity() {
  Verdict v;
  const TriangleWeight weights[] = {TriangleWeight(), TriangleWeight(1, 1, 1)};
  for (int k = 0; k < 100; ++k) {
    const TriangleWeight& w = weights[k % 2];
    const QPoly u = random_poly_upto(4), z = random_poly_upto(4);
    const double nu = sobolev_norm(u, triangle_phi(), w), nz = sobolev_norm(z, triangle_phi(), w);
    v.require(std::abs(bilinear_form(u, z, triangle_phi(), w)) <= 4.0 * nu * nz + 1e-10, "continuity bound violated");
    v.require(bilinear_form(u, u, triangle_phi(), w) >= nu * nu - 1e-10, "coercivity bound violated");
  }
  return v;
}

Verdict divergence_form() {
  Verdict v;
  const QPoly c = helmholtz_potential();
  for (int k = 0; k < 10; ++k) {
    const TriangleWeight w = wsg::testing::random_weight();
    const QWeightSpec spec = triangle_weight_spec(w);
    for (int t = 0; t < 3; ++t) {
      const QPoly u = random_poly_upto(4);
      const auto flux = triangle_phi().apply(gradient(u));
      const QPoly residual =
          spec.denominator() * (apply_L(u, w) - c * u) + cleared_divergence<Rational>({flux[0], flux[1]}, spec);
      v.require(residual.is_zero(), "identity fails for u = " + to_string(u));
    }
  }
  return v;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "Pearson identity, 20 random rational exponent triples", 1.0, pearson_identity},
      {2, "boundary condition on the triangle edges", 1.0, boundary_condition},
      {3, "integration by parts against K, 50 random pairs", 5.0, green_identity},
      {4, "moment/quadrature consistency, rule 8 through degree 7", 1.0, moment_quadrature},
      {5, "manufactured solutions recovered by the weak solve", 10.0, manufactured_solutions},
      {6, "spectral structure and convergence to degree 12", 30.0, spectral_structure},
      {7, "continuity and coercivity on 100 random pairs", 5.0, continuity_coercivity},
      {8, "divergence-form consistency of the operator", 2.0, divergence_form},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (v.ok && seconds > c.budget_seconds) {
      v.ok = false;
      v.detail = "over time budget";
    }
    std::printf("[%s] criterion %d: %s (%.3f s / %.0f s)%s%s\n", v.ok ? "PASS" : "FAIL", c.id, c.name, seconds,
                c.budget_seconds, v.detail.empty() ? "" : " -- ", v.detail.c_str());
    failures += v.ok ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
