#include "wsg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wsg {

SymMatrix SymMatrix::from_upper(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("symmetric matrix must be square");
  SymMatrix s(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j) s.set(i, j, a(i, j));
  return s;
}

double SymMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < order(); ++i)
    for (std::size_t j = 0; j < order(); ++j) sum += m_(i, j) * m_(i, j);
  return std::sqrt(sum);
}

Matrix cholesky(const SymMatrix& a) {
  const std::size_t n = a.order();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) throw NotSpdError(j);
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

std::vector<double> forward_substitute(const Matrix& lower, std::span<const double> b) {
  const std::size_t n = lower.rows();
  std::vector<double> y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= lower(i, k) * y[k];
    y[i] /= lower(i, i);
  }
  return y;
}

std::vector<double> backward_substitute_transpose(const Matrix& lower, std::span<const double> y) {
  const std::size_t n = lower.rows();
  std::vector<double> x(y.begin(), y.end());
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) x[ii] -= lower(k, ii) * x[k];
    x[ii] /= lower(ii, ii);
  }
  return x;
}

std::vector<double> cholesky_solve(const Matrix& lower, std::span<const double> b) {
  if (b.size() != lower.rows()) throw std::invalid_argument("right-hand side has the wrong length");
  const auto y = forward_substitute(lower, b);
  return backward_substitute_transpose(lower, y);
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t p = 0; p < a.rows(); ++p)
    for (std::size_t q = p + 1; q < a.cols(); ++q) sum += a(p, q) * a(p, q);
  return std::sqrt(2.0 * sum);
}

void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();

  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    if (r == p || r == q) continue;
    const double arp = a(r, p);
    const double arq = a(r, q);
    a(r, p) = c * arp - s * arq;
    a(p, r) = a(r, p);
    a(r, q) = s * arp + c * arq;
    a(q, r) = a(r, q);
  }
  for (std::size_t r = 0; r < n; ++r) {
    const double vrp = v(r, p);
    const double vrq = v(r, q);
    v(r, p) = c * vrp - s * vrq;
    v(r, q) = s * vrp + c * vrq;
  }
}

}  // namespace

SymEigen sym_eig(const SymMatrix& input, const JacobiOptions& options) {
  const std::size_t n = input.order();
  Matrix a = input.dense();
  Matrix v = Matrix::identity(n);
  const double scale = input.frobenius_norm();
  const double target = options.relative_tolerance * scale;

  int sweep = 0;
  for (;; ++sweep) {
    const double off = off_diagonal_norm(a);
    if (off <= target || off == 0.0) break;
    if (sweep >= options.max_sweeps) throw NoConvergenceError(sweep, off);
    // Entries this small relative to their diagonal cannot change the
    // eigenvalues at working precision; zeroing them avoids useless rotations.
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        if (sweep > 3 && std::abs(apq) < 1e-18 * (std::abs(a(p, p)) + std::abs(a(q, q)))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        rotate(a, v, p, q);
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  SymEigen out;
  out.sweeps = sweep;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = a(src, src);
    std::size_t big = 0;
    for (std::size_t r = 1; r < n; ++r)
      if (std::abs(v(r, src)) > std::abs(v(big, src))) big = r;
    const double sign = v(big, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = sign * v(r, src);
  }
  return out;
}

SymEigen generalized_sym_eig(const SymMatrix& a, const SymMatrix& m, const JacobiOptions& options) {
  const std::size_t n = a.order();
  if (m.order() != n) throw std::invalid_argument("generalized eigenproblem: order mismatch");
  const Matrix l = cholesky(m);

  // C = L^{-1} A L^{-T}: solve column by column, then symmetrize from the upper triangle.
  Matrix y(n, n);  // Y = L^{-1} A
  std::vector<double> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = a(i, j);
    const auto s = forward_substitute(l, col);
    for (std::size_t i = 0; i < n; ++i) y(i, j) = s[i];
  }
  Matrix c(n, n);  // C^T = L^{-1} Y^T, and C is symmetric
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) col[j] = y(i, j);
    const auto s = forward_substitute(l, col);
    for (std::size_t j = 0; j < n; ++j) c(i, j) = s[j];
  }
  SymEigen eig = sym_eig(SymMatrix::from_upper(c), options);

  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) col[i] = eig.vectors(i, k);
    const auto q = backward_substitute_transpose(l, col);
    for (std::size_t i = 0; i < n; ++i) eig.vectors(i, k) = q[i];
  }
  return eig;
}

Ldlt ldlt(const QMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("ldlt: matrix must be square");
  Ldlt f{QMatrix::identity(n), std::vector<Rational>(n)};
  // e(i,k) = L(i,k) * D(k) for k < i, kept to halve the multiplications.
  QMatrix e(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Rational d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= e(j, k) * f.unit_lower(j, k);
    if (sgn(d) <= 0) throw NotSpdError(j);
    f.diagonal[j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      Rational s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= e(i, k) * f.unit_lower(j, k);
      e(i, j) = s;
      f.unit_lower(i, j) = s / d;
    }
  }
  return f;
}

QMatrix unit_lower_inverse(const QMatrix& l) {
  const std::size_t n = l.rows();
  QMatrix w = QMatrix::identity(n);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      Rational s = 0;
      for (std::size_t k = j; k < i; ++k) s -= l(i, k) * w(k, j);
      w(i, j) = s;
    }
  return w;
}

Matrix lower_inverse(const Matrix& l) {
  const std::size_t n = l.rows();
  Matrix w(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    w(j, j) = 1.0 / l(j, j);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = j; k < i; ++k) s -= l(i, k) * w(k, j);
      w(i, j) = s / l(i, i);
    }
  }
  return w;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

double orthonormality_defect(const Matrix& q, const SymMatrix& m) {
  const Matrix g = q.transposed() * m.dense() * q;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

}  // namespace wsg
