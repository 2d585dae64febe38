#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "pdestab/model.hpp"
#include "pdestab/spacing.hpp"
#include "testutil.hpp"

using namespace pdestab;
namespace tu = pdestab::testutil;

namespace {

// ids touched by a constraint list
std::set<int> touched(const std::vector<LinearConstraint>& cons) {
  std::set<int> ids;
  for (const auto& c : cons)
    for (const auto& [id, v] : c.coeffs) ids.insert(id);
  return ids;
}

std::set<int> poly_matrix_ids(const PolyMatrix& m) {
  std::set<int> ids;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      for (const auto& [mono, c] : m.at(i, j).coeffs())
        for (const auto& [id, v] : c.terms()) ids.insert(id);
  return ids;
}

std::vector<double> constrained_values(tu::Rng& rng, VarPool& pool,
                                       const SpacingTemplate& t) {
  std::vector<double> vals = tu::random_assignment(rng, pool.size());
  tu::project_onto_constraints(vals, t.membership, t.first_var, t.var_count);
  return vals;
}

double quad_pair(const PolyMatrix& T, const PolyMatrix& R,
                 const std::function<Eigen::VectorXd(double)>& W, double a,
                 double b, int deg) {
  return evaluate_functional_3n(T, R, W, a, b, nodes_for_degree(deg));
}

}  // namespace

TEST_CASE("dirichlet membership for the single-integral family") {
  VarPool pool;
  Eigen::MatrixXd D = expand_bc(BCShorthand::named("dirichlet"), 1);
  SpacingTemplate t = build_xi1(pool, 1, 3, D, {0, 1});
  // constraints are exactly P4(a) = 0 and P4(b) = 0
  REQUIRE(t.membership.size() == 2);
  auto ids = touched(t.membership);
  auto p4 = poly_matrix_ids(t.P[3]);
  for (int id : ids) CHECK(p4.count(id) == 1);
  tu::Rng rng(1);
  auto vals = constrained_values(rng, pool, t);
  PolyMatrix P4 = t.P[3].substitute(vals);
  CHECK(std::abs(P4.eval({0, 0, 0})(0, 0)) <= 1e-10);
  CHECK(std::abs(P4.eval({1, 0, 0})(0, 0)) <= 1e-10);

  // everything pinned: no constraints at all
  VarPool pool2;
  SpacingTemplate t2 =
      build_xi1(pool2, 1, 3, Eigen::MatrixXd::Identity(4, 4), {0, 1});
  CHECK(t2.membership.empty());
}

TEST_CASE("dirichlet membership for the double-integral family") {
  VarPool pool;
  Eigen::MatrixXd D = expand_bc(BCShorthand::named("dirichlet"), 1);
  SpacingTemplate t = build_xi2(pool, 1, 2, D, {0, 1});
  REQUIRE(t.membership.size() == 4);  // Q4 at the four corners
  auto ids = touched(t.membership);
  auto q4 = poly_matrix_ids(t.Q[3]);
  for (int id : ids) CHECK(q4.count(id) == 1);
}

TEST_CASE("dirichlet membership for the cross families") {
  VarPool pool;
  Eigen::MatrixXd D = expand_bc(BCShorthand::named("dirichlet"), 1);
  SpacingTemplate t3 = build_xi3(pool, 1, 2, D, {0, 1});
  // Q6(x, a) == 0 and Q6(x, b) == 0 as identities in x
  auto ids3 = touched(t3.membership);
  auto q6 = poly_matrix_ids(t3.Q[1]);
  CHECK(!ids3.empty());
  for (int id : ids3) CHECK(q6.count(id) == 1);
  tu::Rng rng(2);
  auto vals = constrained_values(rng, pool, t3);
  PolyMatrix Q6 = t3.Q[1].substitute(vals);
  for (double x : {0.1, 0.5, 0.9}) {
    CHECK(std::abs(Q6.eval({x, 0.0, 0})(0, 0)) <= 1e-9);
    CHECK(std::abs(Q6.eval({x, 1.0, 0})(0, 0)) <= 1e-9);
  }

  SpacingTemplate t4 = build_xi4(pool, 1, 2, D, {0, 1});
  auto ids4 = touched(t4.membership);
  auto q8 = poly_matrix_ids(t4.Q[1]);
  for (int id : ids4) CHECK(q8.count(id) == 1);
}

TEST_CASE("boundary-term fidelity of the total-derivative expansion") {
  // int W'TW dx must equal the boundary evaluation of
  // (w,w')'[P1 P2; P3 P4](w,w') at b minus at a, for any polynomials.
  tu::Rng rng(11);
  const double a = 0.0, b = 1.0;
  for (int n : {1, 2}) {
    VarPool pool;
    SpacingTemplate t =
        build_xi1(pool, n, 3, Eigen::MatrixXd::Identity(4 * n, 4 * n), {a, b});
    for (int trial = 0; trial < 5; ++trial) {
      auto vals = tu::random_assignment(rng, pool.size());
      PolyMatrix T = t.T_at(vals);
      std::vector<PolyMatrix> P;
      for (const auto& p : t.P) P.push_back(p.substitute(vals));
      std::vector<Polynomial> w;
      for (int c = 0; c < n; ++c) w.push_back(tu::random_poly(rng, Var::x, 4));
      auto W = tu::lambda_sampler(w);
      double lhs =
          quad_pair(T, PolyMatrix::zero(3 * n, 3 * n, {Var::x, Var::y}), W, a, b,
                    3 + 2 * 4 + 2);
      auto eval_v = [&](double x) {
        Eigen::VectorXd wv(n), dv(n);
        for (int c = 0; c < n; ++c) {
          wv(c) = w[size_t(c)].eval({x, 0, 0});
          dv(c) = w[size_t(c)].differentiate(Var::x).eval({x, 0, 0});
        }
        Eigen::MatrixXd p1 = P[0].eval({x, 0, 0}), p2 = P[1].eval({x, 0, 0});
        Eigen::MatrixXd p3 = P[2].eval({x, 0, 0}), p4 = P[3].eval({x, 0, 0});
        return (wv.dot(p1 * wv) + wv.dot(p2 * dv) + dv.dot(p3 * wv) +
                dv.dot(p4 * dv));
      };
      double rhs = eval_v(b) - eval_v(a);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
  }
}

TEST_CASE("boundary-term fidelity of the double-integral expansion") {
  // int int W(x)'R1(x,y)W(y) equals the corner evaluation of
  // (w,w')(x)'[Q](w,w')(y) with the double fundamental theorem.
  tu::Rng rng(13);
  const double a = 0.0, b = 1.0;
  const int n = 1;
  VarPool pool;
  SpacingTemplate t =
      build_xi2(pool, n, 2, Eigen::MatrixXd::Identity(4 * n, 4 * n), {a, b});
  for (int trial = 0; trial < 5; ++trial) {
    auto vals = tu::random_assignment(rng, pool.size());
    PolyMatrix R = t.R_at(vals);
    std::vector<PolyMatrix> Q;
    for (const auto& q : t.Q) Q.push_back(q.substitute(vals));
    std::vector<Polynomial> w{tu::random_poly(rng, Var::x, 4)};
    auto W = tu::lambda_sampler(w);
    double lhs = quad_pair(PolyMatrix::zero(3 * n, 3 * n, {Var::x}), R, W, a, b,
                           2 + 2 * 4 + 2);
    auto f = [&](double xv, double yv) {
      double wx = w[0].eval({xv, 0, 0});
      double dx = w[0].differentiate(Var::x).eval({xv, 0, 0});
      double wy = w[0].eval({yv, 0, 0});
      double dy = w[0].differentiate(Var::x).eval({yv, 0, 0});
      double q1 = Q[0].eval({xv, yv, 0})(0, 0), q3 = Q[2].eval({xv, yv, 0})(0, 0);
      double q2 = Q[1].eval({xv, yv, 0})(0, 0), q4 = Q[3].eval({xv, yv, 0})(0, 0);
      return wx * (q1 * wy + q3 * dy) + dx * (q2 * wy + q4 * dy);
    };
    double rhs = f(b, b) - f(b, a) - f(a, b) + f(a, a);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("annihilation on the constrained subspace") {
  tu::Rng rng(17);
  const double a = 0.0, b = 1.0;
  std::vector<Eigen::MatrixXd> ds;
  for (const char* name : {"dirichlet", "neumann", "mixed_na_db"})
    ds.push_back(expand_bc(BCShorthand::named(name), 1));
  for (const auto& D : ds) {
    for (int which = 0; which < 5; ++which) {
      VarPool pool;
      SpacingTemplate t;
      switch (which) {
        case 0: t = build_xi1(pool, 1, 3, D, {a, b}); break;
        case 1: t = build_xi2(pool, 1, 3, D, {a, b}); break;
        case 2: t = build_xi3(pool, 1, 3, D, {a, b}); break;
        case 3: t = build_xi4(pool, 1, 3, D, {a, b}); break;
        case 4: t = build_sigma0(pool, 1, 3, D, {a, b}); break;
      }
      for (int inst = 0; inst < 4; ++inst) {
        auto vals = constrained_values(rng, pool, t);
        PolyMatrix T = t.T_at(vals);
        PolyMatrix R = t.R_at(vals);
        for (int k = 0; k < 3; ++k) {
          auto w = tu::random_lambda_w(rng, 1, D, a, b, 5);
          auto W = tu::lambda_sampler(w);
          double v = quad_pair(T, R, W, a, b, 3 + 2 * 7 + 2);
          double wn = l2_norm_sq(W, a, b, 32);
          CHECK(std::abs(v) <= 1e-8 * (1.0 + wn));
        }
      }
    }
  }
}

TEST_CASE("membership constraints stay linear") {
  VarPool pool;
  Eigen::MatrixXd D = expand_bc(BCShorthand::named("neumann"), 2);
  SpacingTemplate t = build_sigma0(pool, 2, 4, D, {0, 1});
  CHECK(t.var_count ==
        4 * 4 * 5 + 8 * 4 * 15);  // four univariate + eight bivariate families
  for (const auto& c : t.membership) {
    for (const auto& [id, v] : c.coeffs) {
      CHECK(id >= t.first_var);
      CHECK(id < t.first_var + t.var_count);
    }
    CHECK(c.rhs == 0.0);  // boundary constraints are homogeneous
  }
  // all-zero assignment satisfies everything and gives (T, R) = (0, 0)
  std::vector<double> zeros(size_t(pool.size()), 0.0);
  CHECK(t.T_at(zeros).is_zero());
  CHECK(t.R_at(zeros).is_zero());
}
