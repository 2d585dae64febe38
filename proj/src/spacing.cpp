#include "pdestab/spacing.hpp"

namespace pdestab {

PolyMatrix register_poly_matrix(VarPool& pool, const std::string& name, int n,
                                VarSet vars, int degree) {
  MonomialVector basis = mono_basis(degree, vars);
  PolyMatrix m(n, n, vars);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Polynomial p(vars);
      for (const Mono& mono : basis.entries) {
        std::string vn = name + "[" + std::to_string(i) + "," + std::to_string(j) + "]";
        for (Var v : {Var::x, Var::y, Var::z})
          if (vars.has(v)) vn += "." + std::to_string(int(mono[v]));
        p.set_coeff(mono, LinExpr::variable(pool.create(vn)));
      }
      m.at(i, j) = p;
    }
  return m;
}

namespace {

void check_d(const Eigen::MatrixXd& D, int n) {
  if (D.rows() != 4 * n || D.cols() != 4 * n)
    throw DimensionError("spacing: boundary matrix must be 4n x 4n");
}

// (I - D)' * Pi * (I - D) == 0, one linear constraint per entry.
std::vector<LinearConstraint> annihilate_on_kernel(const PolyMatrix& Pi,
                                                   const Eigen::MatrixXd& D,
                                                   const std::string& tag) {
  const Eigen::MatrixXd ImD = Eigen::MatrixXd::Identity(D.rows(), D.cols()) - D;
  PolyMatrix lhs = PolyMatrix::from_numeric(ImD.transpose(), Pi.vars()) * Pi *
                   PolyMatrix::from_numeric(ImD, Pi.vars());
  return equate(lhs, PolyMatrix::zero(lhs.rows(), lhs.cols(), lhs.vars()), tag);
}

PolyMatrix stack4(const PolyMatrix& b11, const PolyMatrix& b12, const PolyMatrix& b13,
                  const PolyMatrix& b14, const PolyMatrix& b21, const PolyMatrix& b22,
                  const PolyMatrix& b23, const PolyMatrix& b24, const PolyMatrix& b31,
                  const PolyMatrix& b32, const PolyMatrix& b33, const PolyMatrix& b34,
                  const PolyMatrix& b41, const PolyMatrix& b42, const PolyMatrix& b43,
                  const PolyMatrix& b44, int n, VarSet vars) {
  PolyMatrix m(4 * n, 4 * n, vars);
  const PolyMatrix* bs[4][4] = {{&b11, &b12, &b13, &b14},
                                {&b21, &b22, &b23, &b24},
                                {&b31, &b32, &b33, &b34},
                                {&b41, &b42, &b43, &b44}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m.set_block(i * n, j * n, *bs[i][j]);
  return m;
}

}  // namespace

SpacingTemplate build_xi1(VarPool& pool, int n, int ds, const Eigen::MatrixXd& D,
                          Interval iv) {
  check_d(D, n);
  SpacingTemplate t;
  t.n = n;
  t.ds = ds;
  t.interval = iv;
  t.first_var = pool.size();
  const VarSet vx{Var::x};
  for (int k = 1; k <= 4; ++k)
    t.P.push_back(register_poly_matrix(pool, "P" + std::to_string(k), n, vx, ds));
  t.var_count = pool.size() - t.first_var;
  const PolyMatrix &P1 = t.P[0], &P2 = t.P[1], &P3 = t.P[2], &P4 = t.P[3];

  // T is the total-derivative expansion of (w,w')'[P1 P2; P3 P4](w,w').
  t.T = PolyMatrix(3 * n, 3 * n, vx);
  t.T.set_block(0, 0, P1.differentiate(Var::x));
  t.T.set_block(0, n, P1 + P2.differentiate(Var::x));
  t.T.set_block(0, 2 * n, P2);
  t.T.set_block(n, 0, P1 + P3.differentiate(Var::x));
  t.T.set_block(n, n, P2 + P3 + P4.differentiate(Var::x));
  t.T.set_block(n, 2 * n, P4);
  t.T.set_block(2 * n, 0, P3);
  t.T.set_block(2 * n, n, P4);
  t.R = PolyMatrix(3 * n, 3 * n, {Var::x, Var::y});

  auto at = [&](const PolyMatrix& p, double v) { return p.eval_partial(Var::x, v); };
  PolyMatrix zero(n, n, VarSet::none());
  PolyMatrix pi = stack4(-at(P1, iv.a), zero, -at(P2, iv.a), zero,
                         zero, at(P1, iv.b), zero, at(P2, iv.b),
                         -at(P3, iv.a), zero, -at(P4, iv.a), zero,
                         zero, at(P3, iv.b), zero, at(P4, iv.b), n, VarSet::none());
  t.membership = annihilate_on_kernel(pi, D, "xi1");
  return t;
}

SpacingTemplate build_xi2(VarPool& pool, int n, int ds, const Eigen::MatrixXd& D,
                          Interval iv) {
  check_d(D, n);
  SpacingTemplate t;
  t.n = n;
  t.ds = ds;
  t.interval = iv;
  t.first_var = pool.size();
  const VarSet vxy{Var::x, Var::y};
  for (int k = 1; k <= 4; ++k)
    t.Q.push_back(register_poly_matrix(pool, "Q" + std::to_string(k), n, vxy, ds));
  t.var_count = pool.size() - t.first_var;
  const PolyMatrix &Q1 = t.Q[0], &Q2 = t.Q[1], &Q3 = t.Q[2], &Q4 = t.Q[3];

  auto dx = [](const PolyMatrix& p) { return p.differentiate(Var::x); };
  auto dy = [](const PolyMatrix& p) { return p.differentiate(Var::y); };

  // d^2/dxdy of (w(x),w'(x))'[Q1 Q3; Q2 Q4](w(y),w'(y)), collected on
  // W(x) x W(y) blocks.
  t.R = PolyMatrix(3 * n, 3 * n, vxy);
  t.R.set_block(0, 0, dy(dx(Q1)));
  t.R.set_block(0, n, dy(dx(Q3)) + dx(Q1));
  t.R.set_block(0, 2 * n, dx(Q3));
  t.R.set_block(n, 0, dy(dx(Q2)) + dy(Q1));
  t.R.set_block(n, n, dy(dx(Q4)) + dx(Q2) + dy(Q3) + Q1);
  t.R.set_block(n, 2 * n, dx(Q4) + Q3);
  t.R.set_block(2 * n, 0, dy(Q2));
  t.R.set_block(2 * n, n, dy(Q4) + Q2);
  t.R.set_block(2 * n, 2 * n, Q4);
  t.T = PolyMatrix(3 * n, 3 * n, {Var::x});

  auto corner = [&](const PolyMatrix& q, double xv, double yv) {
    return q.eval_partial(Var::x, xv).eval_partial(Var::y, yv);
  };
  const double a = iv.a, b = iv.b;
  PolyMatrix theta1 = stack4(
      corner(Q1, a, a), -corner(Q1, a, b), corner(Q3, a, a), -corner(Q3, a, b),
      -corner(Q1, b, a), corner(Q1, b, b), -corner(Q3, b, a), corner(Q3, b, b),
      corner(Q2, a, a), -corner(Q2, a, b), corner(Q4, a, a), -corner(Q4, a, b),
      -corner(Q2, b, a), corner(Q2, b, b), -corner(Q4, b, a), corner(Q4, b, b), n,
      VarSet::none());
  t.membership = annihilate_on_kernel(theta1, D, "xi2");
  return t;
}

SpacingTemplate build_xi3(VarPool& pool, int n, int ds, const Eigen::MatrixXd& D,
                          Interval iv) {
  check_d(D, n);
  SpacingTemplate t;
  t.n = n;
  t.ds = ds;
  t.interval = iv;
  t.first_var = pool.size();
  const VarSet vxy{Var::x, Var::y};
  PolyMatrix Q5 = register_poly_matrix(pool, "Q5", n, vxy, ds);
  PolyMatrix Q6 = register_poly_matrix(pool, "Q6", n, vxy, ds);
  t.Q = {Q5, Q6};
  t.var_count = pool.size() - t.first_var;

  // d/dy of w''(x)'[Q5 Q6](w(y), w'(y)): only the w''(x) block row survives.
  t.R = PolyMatrix(3 * n, 3 * n, vxy);
  t.R.set_block(2 * n, 0, Q5.differentiate(Var::y));
  t.R.set_block(2 * n, n, Q6.differentiate(Var::y) + Q5);
  t.R.set_block(2 * n, 2 * n, Q6);
  t.T = PolyMatrix(3 * n, 3 * n, {Var::x});

  // Theta2(x) (I - D) == 0 for all x, imposed coefficient-wise in x.
  PolyMatrix theta2(n, 4 * n, {Var::x});
  theta2.set_block(0, 0, -Q5.eval_partial(Var::y, iv.a));
  theta2.set_block(0, n, Q5.eval_partial(Var::y, iv.b));
  theta2.set_block(0, 2 * n, -Q6.eval_partial(Var::y, iv.a));
  theta2.set_block(0, 3 * n, Q6.eval_partial(Var::y, iv.b));
  const Eigen::MatrixXd ImD = Eigen::MatrixXd::Identity(4 * n, 4 * n) - D;
  PolyMatrix lhs = theta2 * PolyMatrix::from_numeric(ImD, {Var::x});
  t.membership = equate(lhs, PolyMatrix::zero(n, 4 * n, {Var::x}), "xi3");
  return t;
}

SpacingTemplate build_xi4(VarPool& pool, int n, int ds, const Eigen::MatrixXd& D,
                          Interval iv) {
  check_d(D, n);
  SpacingTemplate t;
  t.n = n;
  t.ds = ds;
  t.interval = iv;
  t.first_var = pool.size();
  const VarSet vxy{Var::x, Var::y};
  PolyMatrix Q7 = register_poly_matrix(pool, "Q7", n, vxy, ds);
  PolyMatrix Q8 = register_poly_matrix(pool, "Q8", n, vxy, ds);
  t.Q = {Q7, Q8};
  t.var_count = pool.size() - t.first_var;

  // d/dx of (w(x), w'(x))'[Q7; Q8] w''(y): only the w''(y) block column.
  t.R = PolyMatrix(3 * n, 3 * n, vxy);
  t.R.set_block(0, 2 * n, Q7.differentiate(Var::x));
  t.R.set_block(n, 2 * n, Q8.differentiate(Var::x) + Q7);
  t.R.set_block(2 * n, 2 * n, Q8);
  t.T = PolyMatrix(3 * n, 3 * n, {Var::x});

  // (I - D)' Theta3(y) == 0 for all y.
  PolyMatrix theta3(4 * n, n, {Var::y});
  theta3.set_block(0, 0, -Q7.eval_partial(Var::x, iv.a));
  theta3.set_block(n, 0, Q7.eval_partial(Var::x, iv.b));
  theta3.set_block(2 * n, 0, -Q8.eval_partial(Var::x, iv.a));
  theta3.set_block(3 * n, 0, Q8.eval_partial(Var::x, iv.b));
  const Eigen::MatrixXd ImD = Eigen::MatrixXd::Identity(4 * n, 4 * n) - D;
  PolyMatrix lhs = PolyMatrix::from_numeric(ImD.transpose(), {Var::y}) * theta3;
  t.membership = equate(lhs, PolyMatrix::zero(4 * n, n, {Var::y}), "xi4");
  return t;
}

SpacingTemplate build_sigma0(VarPool& pool, int n, int ds, const Eigen::MatrixXd& D,
                             Interval iv) {
  SpacingTemplate t;
  t.n = n;
  t.ds = ds;
  t.interval = iv;
  t.first_var = pool.size();

  SpacingTemplate x1 = build_xi1(pool, n, ds, D, iv);
  SpacingTemplate x2 = build_xi2(pool, n, ds, D, iv);
  SpacingTemplate x3 = build_xi3(pool, n, ds, D, iv);
  SpacingTemplate x4 = build_xi4(pool, n, ds, D, iv);

  t.T = x1.T;
  t.R = x2.R + x3.R + x4.R;
  t.P = x1.P;
  t.Q = x2.Q;
  t.Q.insert(t.Q.end(), x3.Q.begin(), x3.Q.end());
  t.Q.insert(t.Q.end(), x4.Q.begin(), x4.Q.end());
  for (auto* m : {&x1.membership, &x2.membership, &x3.membership, &x4.membership})
    t.membership.insert(t.membership.end(), m->begin(), m->end());
  t.var_count = pool.size() - t.first_var;
  return t;
}

}  // namespace pdestab
