#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pdestab/derivative.hpp"
#include "testutil.hpp"

using namespace pdestab;
namespace tu = pdestab::testutil;

namespace {

PDESystem scalar_system(double lambda) {
  PDESystem sys;
  sys.n = 1;
  sys.a = 0;
  sys.b = 1;
  sys.A = PolyMatrix::identity(1, {Var::x});
  sys.B = PolyMatrix::zero(1, 1, {Var::x});
  sys.C = PolyMatrix::from_numeric(Eigen::MatrixXd::Constant(1, 1, lambda), {Var::x});
  sys.bc_kind = BCKind::dirichlet;
  sys.D = expand_bc(BCShorthand::named("dirichlet"), 1);
  return sys;
}

}  // namespace

TEST_CASE("scalar kernel layout") {
  const double lambda = 3.5;
  PDESystem sys = scalar_system(lambda);
  PolyMatrix M = PolyMatrix::identity(1, {Var::x});
  PolyMatrix N = PolyMatrix::zero(1, 1, {Var::x, Var::y});
  DerivativeKernels k = build_kernels(M, N, sys);
  Eigen::MatrixXd K = k.K.eval({0.4, 0, 0});
  Eigen::MatrixXd want(3, 3);
  want << 2 * lambda, 0, 1, 0, 0, 0, 1, 0, 0;
  CHECK((K - want).norm() <= 1e-14);
  CHECK(k.L.is_zero());
}

TEST_CASE("K11 inherits symmetry from M") {
  tu::Rng rng(3);
  PDESystem sys = preset("example4");
  Eigen::MatrixXd Msym = tu::random_psd(rng, 2);
  PolyMatrix M = PolyMatrix::from_numeric(Msym, {Var::x});
  PolyMatrix N = PolyMatrix::zero(2, 2, {Var::x, Var::y});
  DerivativeKernels k = build_kernels(M, N, sys);
  for (double x : {0.1, 0.7}) {
    Eigen::MatrixXd K11 = k.K.eval({x, 0, 0}).topLeftCorner(2, 2);
    CHECK((K11 - K11.transpose()).norm() <= 1e-13);
  }
}

TEST_CASE("structural zero blocks") {
  tu::Rng rng(5);
  PDESystem sys = preset("example4");
  PolyMatrix M = tu::random_poly_matrix(rng, 2, 2, Var::x, 2);
  PolyMatrix N(2, 2, {Var::x, Var::y});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Polynomial p({Var::x, Var::y});
      p.set_coeff(Mono{{1, 1, 0}}, LinExpr(tu::uniform(rng, -1, 1)));
      p.set_coeff(Mono{}, LinExpr(tu::uniform(rng, -1, 1)));
      N.at(i, j) = p;
    }
  DerivativeKernels k = build_kernels(M, N, sys);
  const int n = 2;
  for (int bi : {1, 2})
    for (int bj : {1, 2}) {
      CHECK(k.K.block(bi * n, bj * n, n, n).is_zero());
      CHECK(k.L.block(bi * n, bj * n, n, n).is_zero());
    }
}

TEST_CASE("chain-rule quadrature identity") {
  // int U'KU + int int U'LU must equal the time derivative computed by
  // substituting u_t = A u'' + B u' + C u directly.
  tu::Rng rng(7);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 1 + int(trial % 2);
    PDESystem sys;
    sys.n = n;
    sys.a = 0;
    sys.b = 1;
    sys.A = tu::random_poly_matrix(rng, n, n, Var::x, 1);
    sys.B = tu::random_poly_matrix(rng, n, n, Var::x, 1);
    sys.C = tu::random_poly_matrix(rng, n, n, Var::x, 1);
    sys.bc_kind = BCKind::dirichlet;
    sys.D = expand_bc(BCShorthand::named("dirichlet"), n);

    PolyMatrix M = tu::random_poly_matrix(rng, n, n, Var::x, 2);
    M += M.transpose();
    PolyMatrix N(n, n, {Var::x, Var::y});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Polynomial p({Var::x, Var::y});
        for (int dx = 0; dx <= 1; ++dx)
          for (int dy = 0; dy <= 1; ++dy)
            p.set_coeff(Mono{{uint8_t(dx), uint8_t(dy), 0}},
                        LinExpr(tu::uniform(rng, -1, 1)));
        N.at(i, j) = p;
      }
    N += N.transpose().swap_vars(Var::x, Var::y);  // symmetric kernel

    DerivativeKernels k = build_kernels(M, N, sys);

    // u as an n x 1 polynomial vector satisfying Dirichlet conditions
    PolyMatrix u(n, 1, {Var::x});
    for (int c = 0; c < n; ++c)
      u.at(c, 0) =
          Polynomial::interval_weight(Var::x, 0, 1) * tu::random_poly(rng, Var::x, 3);
    PolyMatrix du = u.differentiate(Var::x);
    PolyMatrix ddu = du.differentiate(Var::x);
    PolyMatrix ut = sys.A * ddu + sys.B * du + sys.C * u;

    auto Usample = [&](double x) {
      Eigen::VectorXd v(3 * n);
      v.segment(0, n) = u.eval({x, 0, 0});
      v.segment(n, n) = du.eval({x, 0, 0});
      v.segment(2 * n, n) = ddu.eval({x, 0, 0});
      return v;
    };
    const int nq = 24;
    double lhs = evaluate_functional_3n(k.K, k.L, Usample, 0, 1, nq);

    // d/dt of the functional, computed from u_t directly
    PolyMatrix Ny = N;  // N(x,y) with u(x)' M-side handled via samples
    QuadRule q = gauss_legendre(nq, 0, 1);
    double rhs = 0.0;
    for (int i = 0; i < nq; ++i) {
      const double x = q.nodes[size_t(i)];
      Eigen::VectorXd uv = u.eval({x, 0, 0});
      Eigen::VectorXd utv = ut.eval({x, 0, 0});
      Eigen::MatrixXd Mv = M.eval({x, 0, 0});
      rhs += q.weights[size_t(i)] * (utv.dot(Mv * uv) + uv.dot(Mv * utv));
      for (int j = 0; j < nq; ++j) {
        const double y = q.nodes[size_t(j)];
        Eigen::MatrixXd Nv = Ny.eval({x, y, 0});
        Eigen::VectorXd uy = u.eval({y, 0, 0});
        Eigen::VectorXd uty = ut.eval({y, 0, 0});
        rhs += q.weights[size_t(i)] * q.weights[size_t(j)] *
               (utv.dot(Nv * uy) + uv.dot(Nv * uty));
      }
    }
    CHECK(std::abs(lhs - rhs) <= 1e-8 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("assembled problem bookkeeping") {
  PDESystem sys = preset("example1", {{"lambda", 2.0}});
  AssembledProblem ap = assemble(sys, 1, 1e-3, -1e-3);
  CHECK(ap.gamma == 0);
  REQUIRE(ap.psd_blocks.size() == 4);
  CHECK(ap.psd_blocks[0].side == 10);  // positive family at n=2, d=1
  CHECK(ap.psd_blocks[1].side == 10);
  // negative family on 3n=6 with the multiplier part on (u, u_x):
  // 2n(d+1) + 3n(d+1)(d+2)/2 = 8 + 18
  CHECK(ap.psd_blocks[2].side == 26);
  CHECK(ap.psd_blocks[3].side == 26);
  // twelve spacing families at degree 2d+2
  CHECK(int(ap.free_var_ids.size()) == 4 * 4 * 5 + 8 * 4 * 15);
  CHECK(!ap.equalities.empty());

  CHECK_THROWS_AS(assemble(sys, 1, -1.0, -1e-3), Error);
  CHECK_THROWS_AS(assemble(sys, 1, 1e-3, 1e-3), Error);
}
