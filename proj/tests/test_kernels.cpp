#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pdestab/kernels.hpp"
#include "pdestab/quadrature.hpp"
#include "testutil.hpp"

using namespace pdestab;
namespace tu = pdestab::testutil;

namespace {

kernels::BlockConstraints random_block_constraints(tu::Rng& rng, int side, int m,
                                                   int nnz) {
  kernels::BlockConstraints bc;
  bc.side = side;
  bc.ptr.push_back(0);
  for (int r = 0; r < m; ++r) {
    bc.active.push_back(r);
    for (int t = 0; t < nnz; ++t) {
      int i = int(tu::uniform(rng, 0, side - 0.001));
      int j = int(tu::uniform(rng, 0, side - 0.001));
      if (i > j) std::swap(i, j);
      bc.ti.push_back(i);
      bc.tj.push_back(j);
      bc.tv.push_back(tu::uniform(rng, -1, 1));
    }
    bc.ptr.push_back(int(bc.ti.size()));
  }
  return bc;
}

}  // namespace

TEST_CASE("blocked cholesky agrees with the reference") {
  tu::Rng rng(31);
  for (int n : {5, 64, 200, 333}) {
    Eigen::MatrixXd A = tu::random_psd(rng, n, 2.0);
    A.diagonal().array() += 1.0;
    Eigen::MatrixXd ref = A, mine1 = A, mine2 = A;
    REQUIRE(kernels::cholesky_reference(ref));
    REQUIRE(kernels::cholesky_inplace(mine1, 1));
    REQUIRE(kernels::cholesky_inplace(mine2, 2));
    Eigen::MatrixXd L1 = mine1.triangularView<Eigen::Lower>();
    Eigen::MatrixXd L2 = mine2.triangularView<Eigen::Lower>();
    Eigen::MatrixXd Lr = ref.triangularView<Eigen::Lower>();
    CHECK((L1 - Lr).norm() <= 1e-11 * (1.0 + Lr.norm()));
    CHECK((L1 - L2).norm() == 0.0);  // thread count cannot change the result

    Eigen::VectorXd b = Eigen::VectorXd::Random(n);
    Eigen::VectorXd x = b;
    kernels::cholesky_solve(mine1, x);
    CHECK((A.selfadjointView<Eigen::Lower>() * x - b).norm() <=
          1e-9 * (1.0 + b.norm()));
  }
  // non-positive matrix is rejected
  Eigen::MatrixXd bad = -Eigen::MatrixXd::Identity(8, 8);
  CHECK_FALSE(kernels::cholesky_inplace(bad, 2));
}

TEST_CASE("schur formation: parallel equals serial") {
  tu::Rng rng(37);
  const int side = 40, m = 120;
  auto bc = random_block_constraints(rng, side, m, 12);
  Eigen::MatrixXd W = tu::random_psd(rng, side);
  W.diagonal().array() += 0.5;
  Eigen::MatrixXd Hs = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd Hp = Eigen::MatrixXd::Zero(m, m);
  kernels::schur_psd_serial(bc, W, Hs);
  kernels::schur_psd(bc, W, Hp, 2);
  CHECK((Hs - Hp).norm() <= 1e-12 * (1.0 + Hs.norm()));

  // against a dense reference for a few entries
  for (int probe = 0; probe < 8; ++probe) {
    int i = int(tu::uniform(rng, 0, m - 0.001));
    int j = int(tu::uniform(rng, 0, m - 0.001));
    if (i > j) std::swap(i, j);
    Eigen::MatrixXd Ai = Eigen::MatrixXd::Zero(side, side);
    Eigen::MatrixXd Aj = Eigen::MatrixXd::Zero(side, side);
    auto fill = [&](int row, Eigen::MatrixXd& A) {
      for (int t = bc.ptr[size_t(row)]; t < bc.ptr[size_t(row) + 1]; ++t) {
        const int a = bc.ti[size_t(t)], b = bc.tj[size_t(t)];
        const double v = bc.tv[size_t(t)];
        if (a == b)
          A(a, a) += v;
        else {
          A(a, b) += 0.5 * v;
          A(b, a) += 0.5 * v;
        }
      }
    };
    fill(i, Ai);
    fill(j, Aj);
    const double want = (Ai * W * Aj * W).trace();
    CHECK(Hs(i, j) == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("quadrature sum: parallel equals serial") {
  tu::Rng rng(41);
  PolyMatrix M = tu::random_poly_matrix(rng, 2, 2, Var::x, 3);
  PolyMatrix N(2, 2, {Var::x, Var::y});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Polynomial p({Var::x, Var::y});
      p.set_coeff(Mono{{1, 2, 0}}, LinExpr(tu::uniform(rng, -1, 1)));
      p.set_coeff(Mono{{0, 1, 0}}, LinExpr(tu::uniform(rng, -1, 1)));
      N.at(i, j) = p;
    }
  QuadRule q = gauss_legendre(24, 0, 1);
  std::vector<Eigen::VectorXd> ws;
  for (double x : q.nodes) ws.push_back(Eigen::Vector2d(std::sin(3 * x), x * x));
  const double s = kernels::quad_form_sum_serial(M, N, q, ws);
  const double p2 = kernels::quad_form_sum(M, N, q, ws, 2);
  CHECK(std::abs(s - p2) <= 1e-12 * (1.0 + std::abs(s)));
}
