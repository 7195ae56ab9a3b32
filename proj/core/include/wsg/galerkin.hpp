#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wsg/linalg.hpp"
#include "wsg/moments.hpp"
#include "wsg/poly2.hpp"
#include "wsg/weight.hpp"

namespace wsg {

/// How the orthonormal basis is factored out of the monomial Gram matrix.
///  exact:    rational L D L^T and exact congruences, rounded once at the end.
///  floating: double Cholesky; loses definiteness around degree 7-9.
enum class Arithmetic { exact, floating };

/// Raised when the monomial Gram matrix (or S+V) is not numerically SPD.
class FactorizationFailure : public NumericalError {
 public:
  FactorizationFailure(const std::string& what, std::size_t pivot) : NumericalError(what), pivot(pivot) {}
  std::size_t pivot;  // 0-based
};

/// Orthonormal basis of P_degree in L^2(rho): b_k = sum_j transform(k,j) m_j
/// over graded-lex monomials m_j, with transform lower-triangular and a
/// positive diagonal.
struct BasisSet {
  unsigned degree = 0;
  TriangleWeight weight;
  Arithmetic arithmetic = Arithmetic::exact;
  std::vector<Exponent> monomials;
  Matrix transform;
  std::vector<RPoly> functions;

  // Exact arithmetic only: p_k = sum_j orthogonal(k,j) m_j (unit lower) are
  // mutually orthogonal with <p_k,p_k> = mass * norms[k]; b_k = p_k / sqrt(mass*norms[k]).
  QMatrix orthogonal;
  std::vector<Rational> norms;
  double mass = 0.0;

  std::size_t size() const { return monomials.size(); }

  /// Exact, unnormalized p_k (exact arithmetic only).
  QPoly orthogonal_polynomial(std::size_t k) const;

  /// Monomial coefficients of sum_k c_k b_k.
  RPoly expand(std::span<const double> coefficients) const;
};

inline std::size_t basis_dimension(unsigned degree) { return static_cast<std::size_t>(degree + 1) * (degree + 2) / 2; }

BasisSet build_basis(unsigned degree, const TriangleWeight& w, Arithmetic arithmetic = Arithmetic::exact);

/// c(x) = 2 + x1^2 + x2^2
QPoly helmholtz_potential();

/// Mass, stiffness and potential matrices of the weak form.
///   M_ij = <b_i, b_j>,  S_ij = int grad(b_i)^T Phi grad(b_j) rho,  V_ij = int c b_i b_j rho.
struct GramSet {
  SymMatrix mass;
  SymMatrix stiffness;
  SymMatrix potential;

  /// S + V, the matrix of a(.,.).
  SymMatrix operator_matrix() const;
};

GramSet assemble(const BasisSet& basis, const QMatPoly2& phi, const TriangleWeight& w);

/// Gram set over the raw graded-lex monomials (M is not the identity);
/// exercises the generalized eigen path.
GramSet assemble_monomial(unsigned degree, const QMatPoly2& phi, const TriangleWeight& w);

/// sqrt(int u^2 rho + int grad(u)^T Phi grad(u) rho)
double sobolev_norm(const QPoly& u, const QMatPoly2& phi, const TriangleWeight& w);

/// a(u,v) = int grad(v)^T Phi grad(u) rho + int c u v rho
double bilinear_form(const QPoly& u, const QPoly& v, const QMatPoly2& phi, const TriangleWeight& w);
/// a(u,v) / int rho, exact.
Rational bilinear_form_normalized(const QPoly& u, const QPoly& v, const QMatPoly2& phi, const TriangleWeight& w);

/// L u = -x1(1-x1) u_11 + 2 x1 x2 u_12 - x2(1-x2) u_22 - psi1 u_1 - psi2 u_2 + c u with
/// psi1 = alpha+1-(alpha+beta+gamma+3) x1, psi2 = beta+1-(alpha+beta+gamma+3) x2.
QPoly apply_L(const QPoly& u, const TriangleWeight& w);

struct WeakSolution {
  BasisSet basis;
  std::vector<double> coefficients;  // in the orthonormal basis
  RPoly solution;                    // the same function in monomials
};

/// Galerkin projection of the unique weak solution: (S+V) c = r, r_k = <f, b_k>.
WeakSolution solve_weak(const QPoly& f, unsigned degree, const TriangleWeight& w);

/// Non-polynomial right-hand side; r_k by triangle_rule(degree + 4), so approximate.
WeakSolution solve_weak(const std::function<double(double, double)>& f, unsigned degree, const TriangleWeight& w);

struct EigResult {
  std::vector<double> values;  // ascending Ritz values nu_0 <= nu_1 <= ...
  Matrix vectors;              // M-orthonormal coefficient columns
  unsigned degree = 0;

  /// Eigenvalues of T = L^{-1}: mu_n = 1 / nu_n.
  std::vector<double> inverse_values() const;
};

enum class EigPath { automatic, standard, generalized };

/// standard assumes M = I; generalized reduces through Cholesky of M;
/// automatic picks standard when max|M - I| <= 1e-12.
EigResult solve_eig(const GramSet& gram, unsigned degree, EigPath path = EigPath::automatic);
EigResult solve_eig(unsigned degree, const TriangleWeight& w);

struct EigDiagnostics {
  double orthogonality_defect = 0.0;  // max |Q^T M Q - I|
  double max_residual = 0.0;          // max_k ||(S+V) q_k - nu_k M q_k|| / ||q_k||
};

EigDiagnostics diagnose(const GramSet& gram, const EigResult& eig);

struct ConvergenceRow {
  unsigned degree = 0;
  std::vector<double> values;  // lowest min(count, dim) Ritz values
  double orthogonality_defect = 0.0;
  double bound_margin = 0.0;  // nu_0 - 2
};

/// Ritz values for every degree in [min_degree, max_degree]. Degrees are
/// independent problems and are solved concurrently when threads > 1.
std::vector<ConvergenceRow> convergence_study(unsigned min_degree, unsigned max_degree, const TriangleWeight& w,
                                              std::size_t count = 10, unsigned threads = 1);

}  // namespace wsg
