#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pdestab/quadrature.hpp"
#include "testutil.hpp"

using namespace pdestab;
namespace tu = pdestab::testutil;

TEST_CASE("gauss-legendre integrates monomials exactly") {
  for (int n : {2, 5, 12}) {
    QuadRule q = gauss_legendre(n, 0.0, 1.0);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        s += q.weights[size_t(i)] * std::pow(q.nodes[size_t(i)], k);
      CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
    }
  }
  QuadRule q = gauss_legendre(8, -2.0, 3.0);
  double s = 0.0;
  for (int i = 0; i < 8; ++i)
    s += q.weights[size_t(i)] * std::pow(q.nodes[size_t(i)], 3);
  CHECK(s == doctest::Approx((81.0 - 16.0) / 4.0).epsilon(1e-13));
}

TEST_CASE("evaluate_functional basic values") {
  PolyMatrix I2 = PolyMatrix::identity(2, {Var::x});
  PolyMatrix Z2 = PolyMatrix::zero(2, 2, {Var::x, Var::y});
  auto w10 = [](double) { return Eigen::Vector2d(1.0, 0.0); };
  CHECK(evaluate_functional(I2, Z2, w10, 0, 1, 16) == doctest::Approx(1.0));

  PolyMatrix M0 = PolyMatrix::zero(1, 1, {Var::x});
  PolyMatrix N1 = PolyMatrix::identity(1, {Var::x, Var::y});
  auto w1 = [](double) { return Eigen::VectorXd::Ones(1); };
  CHECK(evaluate_functional(M0, N1, w1, 0, 1, 16) == doctest::Approx(1.0));
}

TEST_CASE("evaluate_functional matches symbolic integration") {
  // M = x^2 I, N = (x + y), w = (x), a known closed form:
  // int x^2 * x^2 + int int x (x+y) y = 1/5 + int int (x^2 y + x y^2) = 1/5 + 1/3
  PolyMatrix M(1, 1, {Var::x});
  Polynomial x2({Var::x});
  x2.set_coeff(Mono::unit(Var::x, 2), LinExpr(1.0));
  M.at(0, 0) = x2;
  PolyMatrix N(1, 1, {Var::x, Var::y});
  Polynomial xy({Var::x, Var::y});
  xy.set_coeff(Mono::unit(Var::x, 1), LinExpr(1.0));
  xy.set_coeff(Mono::unit(Var::y, 1), LinExpr(1.0));
  N.at(0, 0) = xy;
  auto wx = [](double x) { return Eigen::VectorXd::Constant(1, x); };
  const double expect = 1.0 / 5.0 + 1.0 / 3.0;
  CHECK(evaluate_functional(M, N, wx, 0, 1, 12) ==
        doctest::Approx(expect).epsilon(1e-12));

  // threads must not change the value beyond roundoff
  double serial = evaluate_functional(M, N, wx, 0, 1, 24, 1);
  double par = evaluate_functional(M, N, wx, 0, 1, 24, 2);
  CHECK(std::abs(serial - par) <= 1e-12 * (1.0 + std::abs(serial)));
}

TEST_CASE("dimension mismatch is rejected") {
  PolyMatrix I2 = PolyMatrix::identity(2, {Var::x});
  PolyMatrix N2 = PolyMatrix::zero(2, 2, {Var::x, Var::y});
  auto w1 = [](double) { return Eigen::VectorXd::Ones(1); };
  CHECK_THROWS_AS(evaluate_functional(I2, N2, w1, 0, 1, 8), DimensionError);
}
