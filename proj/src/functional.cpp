#include "pdestab/functional.hpp"

namespace pdestab {

int sigma_block_side(int n, int d) {
  return n * (d + 1) + n * (d + 1) * (d + 2) / 2;
}

namespace {

// Symbolic middle factor Pblk_sub + g(v) * Qblk_sub over one variable, where
// the sub-block is rows [r0, r0+rows) x cols [c0, c0+cols) of the PSD blocks.
PolyMatrix middle(const SymBlockRef& P, const SymBlockRef& Q, int r0, int c0,
                  int rows, int cols, Var v, const Interval& iv) {
  Polynomial g = Polynomial::interval_weight(v, iv.a, iv.b);
  PolyMatrix m(rows, cols, {v});
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      Polynomial p({v}, P.entry(r0 + i, c0 + j));
      p += g * Polynomial({v}, Q.entry(r0 + i, c0 + j));
      m.at(i, j) = p;
    }
  return m;
}

}  // namespace

FunctionalTemplate build_sigma_general(VarPool& pool, int n, int keep, int d,
                                       double eps, int eps_dim, Interval iv,
                                       const std::string& prefix) {
  if (n < 1 || keep < 1 || keep > n) throw Error("build_sigma: bad dimensions");
  if (d < 0) throw Error("build_sigma: negative degree");
  if (eps <= 0.0) throw Error("build_sigma: eps must be positive here");

  const int t1 = keep * (d + 1);
  const int t2 = n * (d + 1) * (d + 2) / 2;
  const int side = t1 + t2;

  FunctionalTemplate f;
  f.n = n;
  f.d = d;
  f.eps = eps;
  f.interval = iv;
  f.P = register_sym_block(pool, prefix, side);
  f.Q = register_sym_block(pool, prefix + "g", side);

  // Z1 = Z_d(x) (x) E with E selecting the kept coordinates.
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(keep, n);
  E.leftCols(keep) = Eigen::MatrixXd::Identity(keep, keep);
  PolyMatrix Z1 = kron_select(mono_basis(d, {Var::x}), E);
  PolyMatrix Z2 = kron_identity(mono_basis(d, {Var::x, Var::y}), n);

  // M = Z1' (P11 + g Q11) Z1 + eps * diag(I_eps_dim, 0)
  PolyMatrix mid11 = middle(f.P, f.Q, 0, 0, t1, t1, Var::x, iv);
  f.M = Z1.transpose() * mid11 * Z1;
  for (int i = 0; i < eps_dim; ++i) f.M.at(i, i) += Polynomial({Var::x}, eps);

  // N = Z1(x)'(P12 + g(x)Q12)Z2(x,y) + transpose with x<->y
  //     + int_a^b Z2(z,x)'(P22 + g(z)Q22)Z2(z,y) dz
  PolyMatrix mid12 = middle(f.P, f.Q, 0, t1, t1, t2, Var::x, iv);
  PolyMatrix term1 = Z1.transpose() * mid12 * Z2;
  PolyMatrix term2 = term1.transpose().swap_vars(Var::x, Var::y);

  // Z2 holds the basis at (x, y); reindex the arguments to (z, x) and (z, y).
  PolyMatrix Z2zx = Z2.rename_var(Var::x, Var::z).rename_var(Var::y, Var::x);
  PolyMatrix Z2zy = Z2.rename_var(Var::x, Var::z);
  PolyMatrix mid22 = middle(f.P, f.Q, t1, t1, t2, t2, Var::z, iv);
  PolyMatrix term3 =
      (Z2zx.transpose() * mid22 * Z2zy).integrate_definite(Var::z, iv.a, iv.b);

  f.N = term1 + term2 + term3;
  return f;
}

FunctionalTemplate build_sigma_plus(VarPool& pool, int n, int d, double eps,
                                    Interval iv, const std::string& prefix) {
  if (eps <= 0.0) throw Error("build_sigma_plus: eps must be positive");
  return build_sigma_general(pool, n, n, d, eps, n, iv, prefix);
}

FunctionalTemplate build_sigma_minus(VarPool& pool, int n, int d, double eps,
                                     Interval iv, const std::string& prefix) {
  if (eps >= 0.0) throw Error("build_sigma_minus: eps must be negative");
  FunctionalTemplate f = build_sigma_general(pool, n, n, d, -eps, n, iv, prefix);
  f.eps = eps;
  f.M = -f.M;
  f.N = -f.N;
  return f;
}

}  // namespace pdestab
