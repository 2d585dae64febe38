#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pdestab/functional.hpp"
#include "testutil.hpp"

using namespace pdestab;
namespace tu = pdestab::testutil;

TEST_CASE("block side formula") {
  CHECK(sigma_block_side(2, 2) == 18);
  CHECK(sigma_block_side(2, 1) == 10);
  CHECK(sigma_block_side(1, 1) == 5);
  VarPool pool;
  auto f = build_sigma_plus(pool, 2, 2, 1e-3, {0, 1});
  CHECK(f.P.side == 18);
  CHECK(f.Q.side == 18);
}

TEST_CASE("zero blocks leave only the eps identity") {
  VarPool pool;
  auto f = build_sigma_plus(pool, 1, 0, 1.0, {0, 1});
  std::vector<double> zeros(size_t(pool.size()), 0.0);
  PolyMatrix M = f.M_at(zeros);
  PolyMatrix N = f.N_at(zeros);
  CHECK(M.at(0, 0).coeff(Mono{}).constant() == 1.0);
  CHECK(M.at(0, 0).coeffs().size() == 1);
  CHECK(N.is_zero());
}

TEST_CASE("identity P at n=1 d=1 expands by hand") {
  VarPool pool;
  auto f = build_sigma_plus(pool, 1, 1, 1e-3, {0, 1});
  REQUIRE(f.P.side == 5);
  std::vector<double> vals(size_t(pool.size()), 0.0);
  tu::assign_psd_block(vals, f.P, Eigen::MatrixXd::Identity(5, 5));
  PolyMatrix M = f.M_at(vals);
  // M = 1 + x^2 + eps
  CHECK(M.at(0, 0).coeff(Mono{}).constant() == doctest::Approx(1.0 + 1e-3));
  CHECK(M.at(0, 0).coeff(Mono::unit(Var::x, 2)).constant() == doctest::Approx(1.0));
  CHECK(M.at(0, 0).coeff(Mono::unit(Var::x, 1)).constant() == 0.0);
  // N = int Z2(z,x)'Z2(z,y) dz with Z2 = (1, z, second-argument): on [0,1]
  // the basis (1, z, x) against (1, z, y) gives 4/3 + xy
  PolyMatrix N = f.N_at(vals);
  CHECK(N.at(0, 0).coeff(Mono{}).constant() == doctest::Approx(4.0 / 3));
  CHECK(N.at(0, 0).coeff(Mono{{1, 1, 0}}).constant() == doctest::Approx(1.0));
}

TEST_CASE("kernel symmetry holds identically in the decision variables") {
  VarPool pool;
  auto f = build_sigma_plus(pool, 2, 2, 1e-3, {0, 1});
  PolyMatrix diff = f.N.transpose().swap_vars(Var::x, Var::y) - f.N;
  double worst = 0.0;
  for (int i = 0; i < diff.rows(); ++i)
    for (int j = 0; j < diff.cols(); ++j)
      for (const auto& [m, c] : diff.at(i, j).coeffs())
        worst = std::max(worst, c.max_abs());
  CHECK(worst == 0.0);
}

TEST_CASE("interval weight vanishes at the endpoints") {
  const double a = -0.5, b = 2.0;
  Polynomial g = Polynomial::interval_weight(Var::x, a, b);
  CHECK(g.eval({a, 0, 0}) == doctest::Approx(0.0));
  CHECK(g.eval({b, 0, 0}) == doctest::Approx(0.0));
  CHECK(g.eval({0.5 * (a + b), 0, 0}) ==
        doctest::Approx((b - a) * (b - a) / 4.0));
}

TEST_CASE("without the weight the family reduces to the plain form") {
  VarPool pool;
  auto f = build_sigma_plus(pool, 1, 1, 1e-3, {0, 1});
  tu::Rng rng(7);
  std::vector<double> vals(size_t(pool.size()), 0.0);
  tu::assign_psd_block(vals, f.P, tu::random_psd(rng, f.P.side));
  // Q stays zero: M must equal Z1'P11Z1 + eps exactly
  PolyMatrix M = f.M_at(vals);
  PolyMatrix Z1 = kron_identity(mono_basis(1, {Var::x}), 1);
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) P(i, j) = vals[size_t(f.P.var(i, j))];
  for (double x : {0.0, 0.3, 0.9}) {
    Eigen::MatrixXd z = Z1.eval({x, 0, 0});
    double want = (z.transpose() * P.topLeftCorner(2, 2) * z)(0, 0) + 1e-3;
    CHECK(M.eval({x, 0, 0})(0, 0) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("positivity: V(w) >= eps ||w||^2 on random instances") {
  tu::Rng rng(101);
  const double eps = 1e-3;
  for (int n : {1, 2}) {
    for (int d : {0, 1, 2}) {
      VarPool pool;
      auto f = build_sigma_plus(pool, n, d, eps, {0, 1});
      for (int inst = 0; inst < 8; ++inst) {
        std::vector<double> vals(size_t(pool.size()), 0.0);
        tu::assign_psd_block(vals, f.P, tu::random_psd(rng, f.P.side));
        tu::assign_psd_block(vals, f.Q, tu::random_psd(rng, f.Q.side));
        PolyMatrix M = f.M_at(vals);
        PolyMatrix N = f.N_at(vals);
        for (int t = 0; t < 5; ++t) {
          std::vector<Polynomial> wp;
          for (int c = 0; c < n; ++c) wp.push_back(tu::random_poly(rng, Var::x, 4));
          auto w = [&](double x) {
            Eigen::VectorXd v(n);
            for (int c = 0; c < n; ++c) v(c) = wp[size_t(c)].eval({x, 0, 0});
            return v;
          };
          const int nq = nodes_for_degree(2 * (d + 1) + 2 + 8);
          double V = evaluate_functional(M, N, w, 0, 1, nq);
          double norm2 = l2_norm_sq(w, 0, 1, nq);
          CHECK(V >= eps * norm2 - 1e-8);
        }
      }
    }
  }
}

TEST_CASE("negative family mirrors the positive one") {
  VarPool pool;
  CHECK_THROWS_AS(build_sigma_minus(pool, 1, 1, 0.5, {0, 1}), Error);

  auto f = build_sigma_minus(pool, 1, 1, -0.5, {0, 1});
  std::vector<double> zeros(size_t(pool.size()), 0.0);
  PolyMatrix M = f.M_at(zeros);
  CHECK(M.at(0, 0).coeff(Mono{}).constant() == doctest::Approx(-0.5));

  // random PSD instance: V(w) <= eps ||w||^2
  tu::Rng rng(55);
  for (int inst = 0; inst < 10; ++inst) {
    std::vector<double> vals(size_t(pool.size()), 0.0);
    tu::assign_psd_block(vals, f.P, tu::random_psd(rng, f.P.side));
    tu::assign_psd_block(vals, f.Q, tu::random_psd(rng, f.Q.side));
    PolyMatrix M2 = f.M_at(vals);
    PolyMatrix N2 = f.N_at(vals);
    Polynomial wp = tu::random_poly(rng, Var::x, 5);
    auto w = [&](double x) { return Eigen::VectorXd::Constant(1, wp.eval({x, 0, 0})); };
    double V = evaluate_functional(M2, N2, w, 0, 1, 64);
    double norm2 = l2_norm_sq(w, 0, 1, 64);
    CHECK(V <= -0.5 * norm2 + 1e-8);
  }
}
