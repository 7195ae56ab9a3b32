#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "wsg/linalg.hpp"

using namespace wsg;

namespace {

SymMatrix random_symmetric(std::size_t n) {
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a.set(i, j, wsg::testing::uniform_real(-1, 1));
  return a;
}

SymMatrix random_spd(std::size_t n) {
  Matrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = wsg::testing::uniform_real(-1, 1);
  const Matrix g = b.transposed() * b;
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a.set(i, j, g(i, j) + (i == j ? double(n) : 0.0));
  return a;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("cholesky examples") {
  const Matrix id = cholesky(SymMatrix::from_upper(Matrix::identity(3)));
  CHECK(id == Matrix::identity(3));

  SymMatrix a(2);
  a.set(0, 0, 4);
  a.set(0, 1, 2);
  a.set(1, 1, 5);
  const Matrix l = cholesky(a);
  CHECK(l(0, 0) == 2.0);
  CHECK(l(0, 1) == 0.0);
  CHECK(l(1, 0) == 1.0);
  CHECK(l(1, 1) == 2.0);

  SymMatrix bad(2);
  bad.set(0, 0, 1);
  bad.set(0, 1, 2);
  bad.set(1, 1, 1);
  try {
    cholesky(bad);
    FAIL("expected NotSpdError");
  } catch (const NotSpdError& e) {
    CHECK(e.pivot == 1);
    CHECK(std::string(e.what()).find("pivot 2") != std::string::npos);
  }
}

TEST_CASE("sym_eig examples") {
  SymMatrix d(2);
  d.set(0, 0, 3);
  d.set(1, 1, 1);
  auto e = sym_eig(d);
  CHECK(e.values[0] == doctest::Approx(1.0));
  CHECK(e.values[1] == doctest::Approx(3.0));
  CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors(0, 1)) == doctest::Approx(1.0));

  SymMatrix swap(2);
  swap.set(0, 1, 1);
  e = sym_eig(swap);
  CHECK(e.values[0] == doctest::Approx(-1.0));
  CHECK(e.values[1] == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors(0, 0)) == doctest::Approx(std::sqrt(0.5)));
  CHECK(e.vectors(0, 0) * e.vectors(1, 0) == doctest::Approx(-0.5));
  CHECK(e.vectors(0, 1) * e.vectors(1, 1) == doctest::Approx(0.5));

  SymMatrix t(2);
  t.set(0, 0, 2);
  t.set(0, 1, 1);
  t.set(1, 1, 2);
  e = sym_eig(t);
  CHECK(e.values[0] == doctest::Approx(1.0));
  CHECK(e.values[1] == doctest::Approx(3.0));

  CHECK(sym_eig(SymMatrix(0)).values.empty());
}

TEST_CASE("property: eigen reconstruction up to order 300") {
  for (std::size_t n : {1u, 2u, 7u, 40u, 120u, 300u}) {
    const SymMatrix a = random_symmetric(n);
    const SymEigen e = sym_eig(a);
    Matrix lam(n, n);
    for (std::size_t i = 0; i < n; ++i) lam(i, i) = e.values[i];
    const Matrix back = e.vectors * lam * e.vectors.transposed();
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(back(i, j) - a(i, j)));
    CHECK(err <= 1e-9 * a.frobenius_norm());
    CHECK(orthonormality_defect(e.vectors, SymMatrix::from_upper(Matrix::identity(n))) < 1e-10);
    CHECK(std::is_sorted(e.values.begin(), e.values.end()));
  }
}

TEST_CASE("property: cholesky solve residual") {
  for (std::size_t n : {1u, 5u, 30u, 100u}) {
    const SymMatrix a = random_spd(n);
    std::vector<double> b(n);
    for (double& x : b) x = wsg::testing::uniform_real(-1, 1);
    const auto x = cholesky_solve(cholesky(a), b);
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = -b[i];
      for (std::size_t j = 0; j < n; ++j) r[i] += a(i, j) * x[j];
    }
    CHECK(norm2(r) <= 1e-10 * a.frobenius_norm() * norm2(x));
  }
}

TEST_CASE("generalized eigenproblem") {
  const std::size_t n = 12;
  const SymMatrix a = random_symmetric(n);
  const SymMatrix m = random_spd(n);
  const SymEigen e = generalized_sym_eig(a, m);
  CHECK(orthonormality_defect(e.vectors, m) < 1e-10);
  for (std::size_t k = 0; k < n; ++k) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      for (std::size_t j = 0; j < n; ++j) r += (a(i, j) - e.values[k] * m(i, j)) * e.vectors(j, k);
      worst = std::max(worst, std::abs(r));
    }
    CHECK(worst < 1e-9);
  }
  CHECK_THROWS_AS(generalized_sym_eig(a, a), NotSpdError);
}

TEST_CASE("exact LDL^T and triangular inverses") {
  QMatrix a(3, 3);
  const long vals[3][3] = {{4, 2, 2}, {2, 5, 3}, {2, 3, 6}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = vals[i][j];
  const Ldlt f = ldlt(a);
  QMatrix d(3, 3);
  for (int i = 0; i < 3; ++i) d(i, i) = f.diagonal[i];
  CHECK(f.unit_lower * d * f.unit_lower.transposed() == a);
  const QMatrix w = unit_lower_inverse(f.unit_lower);
  CHECK(w * f.unit_lower == QMatrix::identity(3));
  CHECK(lower_congruence(w, a) == d);

  Matrix l(2, 2);
  l(0, 0) = 2;
  l(1, 0) = 1;
  l(1, 1) = 4;
  const Matrix li = lower_inverse(l);
  const Matrix prod = li * l;
  CHECK(prod(0, 0) == doctest::Approx(1.0));
  CHECK(prod(1, 1) == doctest::Approx(1.0));
  CHECK(std::abs(prod(1, 0)) < 1e-15);
  CHECK(li(0, 1) == 0.0);

  QMatrix singular(2, 2);
  singular(0, 0) = 1;
  singular(0, 1) = 1;
  singular(1, 0) = 1;
  singular(1, 1) = 1;
  CHECK_THROWS_AS(ldlt(singular), NotSpdError);
}

TEST_CASE("non-finite input is rejected") {
  SymMatrix a(2);
  a.set(0, 0, std::nan(""));
  a.set(1, 1, 1);
  CHECK_THROWS_AS(cholesky(a), NotSpdError);
}
