#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsg/rational.hpp"

namespace wsg {

/// Row-major dense matrix over double or Rational.
template <class T>
class Dense {
 public:
  Dense() = default;
  Dense(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Dense identity(std::size_t n) {
    Dense m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  Dense transposed() const {
    Dense t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend Dense operator*(const Dense& a, const Dense& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch in product");
    Dense out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == T(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend bool operator==(const Dense&, const Dense&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Matrix = Dense<double>;
using QMatrix = Dense<Rational>;

/// Dense symmetric matrix; set() writes both mirrored entries, so symmetry holds
/// by construction.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t order) : m_(order, order) {}

  /// Takes the upper triangle of a square matrix as authoritative.
  static SymMatrix from_upper(const Matrix& a);

  std::size_t order() const { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  void set(std::size_t i, std::size_t j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  const Matrix& dense() const { return m_; }

  double frobenius_norm() const;

 private:
  Matrix m_;
};

/// Base for failures of the numerical kernels (mapped to exit status 2 by the CLI).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A nonpositive pivot was met; pivot is the 0-based row index.
class NotSpdError : public NumericalError {
 public:
  explicit NotSpdError(std::size_t pivot)
      : NumericalError("matrix is not positive definite (pivot " + std::to_string(pivot + 1) + ")"),
        pivot(pivot) {}
  std::size_t pivot;
};

class NoConvergenceError : public NumericalError {
 public:
  NoConvergenceError(int sweeps, double off_norm)
      : NumericalError("Jacobi eigensolver did not converge after " + std::to_string(sweeps) + " sweeps"),
        sweeps(sweeps),
        off_norm(off_norm) {}
  int sweeps;
  double off_norm;
};

/// Lower factor L with L L^T = A. Throws NotSpdError at the first pivot <= 0.
Matrix cholesky(const SymMatrix& a);

/// Solves L L^T x = b given the Cholesky factor.
std::vector<double> cholesky_solve(const Matrix& lower, std::span<const double> b);

/// Solves L y = b (forward) and L^T x = y (backward) respectively.
std::vector<double> forward_substitute(const Matrix& lower, std::span<const double> b);
std::vector<double> backward_substitute_transpose(const Matrix& lower, std::span<const double> y);

struct JacobiOptions {
  double relative_tolerance = 1e-12;  // off(A) <= tol * ||A||_F
  int max_sweeps = 64;
};

struct SymEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k pairs with values[k]; orthonormal
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver. Columns are sign-normalized so the entry of
/// largest magnitude is positive; equal-value clusters have solver-defined order.
SymEigen sym_eig(const SymMatrix& a, const JacobiOptions& options = {});

/// A q = nu M q for symmetric A and SPD M via Cholesky of M and the congruence
/// L^{-1} A L^{-T}. Returned vectors are M-orthonormal.
SymEigen generalized_sym_eig(const SymMatrix& a, const SymMatrix& m, const JacobiOptions& options = {});

/// Exact A = L D L^T with unit lower-triangular L. Throws NotSpdError when a
/// pivot of D is <= 0.
struct Ldlt {
  QMatrix unit_lower;
  std::vector<Rational> diagonal;
};
Ldlt ldlt(const QMatrix& a);

/// Inverse of a unit lower-triangular matrix (exact).
QMatrix unit_lower_inverse(const QMatrix& l);

/// Inverse of a lower-triangular matrix with nonzero diagonal.
Matrix lower_inverse(const Matrix& l);

/// W S W^T for lower-triangular W and symmetric S; only the lower triangle of
/// W is read and the result is assembled on its upper triangle, then mirrored.
template <class T>
Dense<T> lower_congruence(const Dense<T>& w, const Dense<T>& s) {
  const std::size_t n = w.rows();
  Dense<T> ws(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k <= i; ++k) {
      const T& wik = w(i, k);
      if (wik == T(0)) continue;
      for (std::size_t j = 0; j < n; ++j) ws(i, j) += wik * s(k, j);
    }
  Dense<T> out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = i; l < n; ++l) {
      T acc(0);
      for (std::size_t k = 0; k <= l; ++k) acc += ws(i, k) * w(l, k);
      out(i, l) = acc;
      out(l, i) = acc;
    }
  return out;
}

double max_abs(const Matrix& a);

/// Largest |(Q^T M Q - I)_{ij}| over all entries.
double orthonormality_defect(const Matrix& q, const SymMatrix& m);

}  // namespace wsg
