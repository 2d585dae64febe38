#pragma once

#include <Eigen/Dense>

#include "pdestab/functional.hpp"
#include "pdestab/polymat.hpp"

namespace pdestab {

/// Quadratic-form pair (T, R) on triples W = (w, w', w'') whose value
///   int W'TW dx + int int W(x)'R(x,y)W(y) dy dx
/// vanishes whenever w, w', w'' are tied by differentiation and the boundary
/// matrix D annihilates (w(a), w(b), w'(a), w'(b)). Generated from free
/// polynomial coefficients; membership in the family is a set of linear
/// equalities coming from total-derivative boundary terms.
struct SpacingTemplate {
  int n = 0;    // base dimension of w; T and R are 3n x 3n
  int ds = 0;   // degree cap of the free polynomials
  Interval interval;
  PolyMatrix T;  // 3n x 3n in x (zero (3,3) block)
  PolyMatrix R;  // 3n x 3n in (x, y)
  std::vector<LinearConstraint> membership;
  std::vector<PolyMatrix> P;  // on-diagonal family: P1..P4, n x n in x
  std::vector<PolyMatrix> Q;  // integral families: Q1..Q8, n x n in (x, y)
  int first_var = 0, var_count = 0;  // contiguous id range in the pool

  PolyMatrix T_at(std::span<const double> values) const { return T.substitute(values); }
  PolyMatrix R_at(std::span<const double> values) const { return R.substitute(values); }
};

/// Free n x n polynomial matrix with one decision variable per coefficient.
PolyMatrix register_poly_matrix(VarPool& pool, const std::string& name, int n,
                                VarSet vars, int degree);

/// Single-integral family: T from P1..P4 and their derivatives; boundary
/// term (w,w')'[P](w,w') evaluated at the endpoints must vanish on ker D.
SpacingTemplate build_xi1(VarPool& pool, int n, int ds, const Eigen::MatrixXd& D,
                          Interval iv);

/// Double-integral family from Q1..Q4 and their mixed partials.
SpacingTemplate build_xi2(VarPool& pool, int n, int ds, const Eigen::MatrixXd& D,
                          Interval iv);

/// Cross family pairing w'' on the left with boundary values of (w, w').
SpacingTemplate build_xi3(VarPool& pool, int n, int ds, const Eigen::MatrixXd& D,
                          Interval iv);

/// Mirror of build_xi3 with w'' on the right.
SpacingTemplate build_xi4(VarPool& pool, int n, int ds, const Eigen::MatrixXd& D,
                          Interval iv);

/// Union of the four families with disjoint coefficients; R = R1 + R2 + R3.
SpacingTemplate build_sigma0(VarPool& pool, int n, int ds, const Eigen::MatrixXd& D,
                             Interval iv);

}  // namespace pdestab
