#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wsg/moments.hpp"
#include "wsg/poly2.hpp"
#include "wsg/rational.hpp"

namespace wsg {

/// Zero tolerance for exact coefficients, a relative 1e-12 for floating ones.
template <class C>
constexpr double default_tolerance() {
  return std::is_same_v<C, double> ? 1e-12 : 0.0;
}

/// One factor q^exponent of a product weight; q is an affine form.
template <class C>
struct WeightFactor {
  BasicPoly2<C> form;
  C exponent;
};

/// rho = prod q_i^{exponent_i}. grad(rho)/rho = sum exponent_i grad(q_i)/q_i,
/// so every classical-weight check clears to a polynomial identity after
/// multiplying by denominator() = prod q_i.
template <class C>
struct WeightSpec {
  std::vector<WeightFactor<C>> factors;

  BasicPoly2<C> denominator() const;
  /// prod_{k != i} q_k
  BasicPoly2<C> cofactor(std::size_t i) const;
};

using QWeightSpec = WeightSpec<Rational>;
using RWeightSpec = WeightSpec<double>;

/// x1^alpha x2^beta (1-x1-x2)^gamma as a factor list (in that order).
QWeightSpec triangle_weight_spec(const TriangleWeight& w);
RWeightSpec to_floating(const QWeightSpec& w);

/// The triangle matrix [[x1(1-x1), -x1 x2], [-x1 x2, x2(1-x2)]].
QMatPoly2 triangle_phi();

/// Straight edge {form = 0} with an exact outward direction; divisibility is
/// scale-free so the direction need not be unit length.
struct Edge {
  QPoly form;
  Rational nx;
  Rational ny;

  std::pair<double, double> unit_normal() const;
};

/// Edges of a convex polygon listed in cyclic order.
struct DomainEdges {
  std::vector<Edge> edges;

  /// (x1, (-1,0)), (x2, (0,-1)), (1-x1-x2, (1,1)).
  static DomainEdges triangle();

  /// Intersections of consecutive edge lines; throws std::invalid_argument if
  /// a form is not affine or two consecutive edges are parallel.
  std::vector<std::pair<Rational, Rational>> vertices() const;
};

/// Throws std::invalid_argument unless every factor form has degree exactly 1
/// and every exponent is > -1.
template <class C>
void validate_weight(const WeightSpec<C>& w);

/// validate_weight plus positivity of every factor on the polygon interior
/// (nonnegative at all vertices, positive at the vertex centroid).
template <class C>
void validate_weight_on(const WeightSpec<C>& w, const DomainEdges& domain);

/// psi_i(x) = x . D_i + E_i
template <class C>
struct PearsonData {
  BasicPoly2<C> psi1;
  BasicPoly2<C> psi2;
  std::array<std::array<C, 2>, 2> directions{};  // directions[i] = D_{i+1}
  std::array<C, 2> constants{};                  // E_1, E_2

  C det() const { return directions[0][0] * directions[1][1] - directions[0][1] * directions[1][0]; }
  const BasicPoly2<C>& psi(int i) const { return i == 0 ? psi1 : psi2; }
};

enum class PearsonStage { not_divisible, psi_not_affine, degenerate_directions };

std::string to_string(PearsonStage stage);

template <class C>
struct PearsonOutcome {
  std::optional<PearsonData<C>> data;
  PearsonStage failed_stage = PearsonStage::not_divisible;
  int component = 0;             // 0-based column of Phi that failed
  BasicPoly2<C> numerator;       // P_j for the failing component

  bool ok() const { return data.has_value(); }
};

/// D * div(rho F) / rho for a polynomial vector field F, by the product rule:
///   D (d1 F1 + d2 F2) + sum_k F_k sum_i exponent_i (d_k q_i) cofactor_i.
template <class C>
BasicPoly2<C> cleared_divergence(const PolyVec2<C>& field, const WeightSpec<C>& w);

/// Solves div(rho Phi) = rho (psi1, psi2) for affine psi by exact division of
/// P_j = cleared_divergence(column j of Phi) by prod q_i.
template <class C>
PearsonOutcome<C> pearson_check(const BasicMatPoly2<C>& phi, const WeightSpec<C>& w,
                                double tolerance = default_tolerance<C>());

struct BoundaryFailure {
  std::size_t edge = 0;  // 0-based
  int component = 0;     // 0-based component of Phi n
};

struct BoundaryOutcome {
  std::vector<bool> edge_pass;
  std::optional<BoundaryFailure> first_failure;

  bool ok() const { return !first_failure.has_value(); }
};

/// Every component of Phi n must be divisible by the edge form, so that
/// (rho Phi grad p) . n vanishes on that edge for every polynomial p.
template <class C>
BoundaryOutcome boundary_check(const BasicMatPoly2<C>& phi, const DomainEdges& domain,
                               double tolerance = default_tolerance<C>());

/// Layout of grad(f, g) in the auxiliary system.
/// A: rows index the derivative axis, J = [[d1 f, d1 g], [d2 f, d2 g]].
/// B: columns index the derivative axis, J = [[d1 f, d2 f], [d1 g, d2 g]].
enum class Orientation { A, B };

std::string to_string(Orientation o);

template <class C>
struct CompatOutcome {
  bool pass = false;
  /// lhs - Phi J for (f,g) = (phi11, phi21) and (phi12, phi22).
  std::array<BasicMatPoly2<C>, 2> residuals{};
};

template <class C>
CompatOutcome<C> compat_system_check(const BasicMatPoly2<C>& phi, Orientation orientation,
                                     double tolerance = default_tolerance<C>());

/// K with div(rho Phi v) = K rho:
///   K = psi1 v1 + psi2 v2 + phi11 d1 v1 + phi21 d2 v1 + phi12 d1 v2 + phi22 d2 v2.
template <class C>
BasicPoly2<C> divergence_K(const BasicPoly2<C>& v1, const BasicPoly2<C>& v2, const BasicMatPoly2<C>& phi,
                           const PearsonData<C>& psi);

/// Drops coefficients with magnitude <= tolerance * max|p| (no-op at tolerance 0).
template <class C>
BasicPoly2<C> prune(const BasicPoly2<C>& p, double tolerance);

#define WSG_WEIGHT_EXTERN(C)                                                                                     \
  extern template struct WeightSpec<C>;                                                                          \
  extern template void validate_weight<C>(const WeightSpec<C>&);                                                 \
  extern template void validate_weight_on<C>(const WeightSpec<C>&, const DomainEdges&);                          \
  extern template BasicPoly2<C> cleared_divergence<C>(const PolyVec2<C>&, const WeightSpec<C>&);                 \
  extern template PearsonOutcome<C> pearson_check<C>(const BasicMatPoly2<C>&, const WeightSpec<C>&, double);     \
  extern template BoundaryOutcome boundary_check<C>(const BasicMatPoly2<C>&, const DomainEdges&, double);        \
  extern template CompatOutcome<C> compat_system_check<C>(const BasicMatPoly2<C>&, Orientation, double);         \
  extern template BasicPoly2<C> divergence_K<C>(const BasicPoly2<C>&, const BasicPoly2<C>&,                      \
                                                const BasicMatPoly2<C>&, const PearsonData<C>&);                 \
  extern template BasicPoly2<C> prune<C>(const BasicPoly2<C>&, double);

WSG_WEIGHT_EXTERN(Rational)
WSG_WEIGHT_EXTERN(double)
#undef WSG_WEIGHT_EXTERN

}  // namespace wsg
