#include "pdestab/derivative.hpp"

namespace pdestab {

DerivativeKernels build_kernels(const PolyMatrix& M, const PolyMatrix& N,
                                const PDESystem& sys) {
  const int n = sys.n;
  if (M.rows() != n || M.cols() != n || N.rows() != n || N.cols() != n)
    throw DimensionError("build_kernels: M, N must be n x n");

  const PolyMatrix& A = sys.A;
  const PolyMatrix& B = sys.B;
  const PolyMatrix& C = sys.C;

  DerivativeKernels k;
  k.K = PolyMatrix(3 * n, 3 * n, {Var::x});
  k.K.set_block(0, 0, C.transpose() * M + M * C);
  k.K.set_block(0, n, M * B);
  k.K.set_block(0, 2 * n, M * A);
  k.K.set_block(n, 0, B.transpose() * M);
  k.K.set_block(2 * n, 0, A.transpose() * M);

  // Right factors act at y, left factors at x.
  PolyMatrix Ay = A.rename_var(Var::x, Var::y);
  PolyMatrix By = B.rename_var(Var::x, Var::y);
  PolyMatrix Cy = C.rename_var(Var::x, Var::y);
  k.L = PolyMatrix(3 * n, 3 * n, {Var::x, Var::y});
  k.L.set_block(0, 0, C.transpose() * N + N * Cy);
  k.L.set_block(0, n, N * By);
  k.L.set_block(0, 2 * n, N * Ay);
  k.L.set_block(n, 0, B.transpose() * N);
  k.L.set_block(2 * n, 0, A.transpose() * N);
  return k;
}

AssembledProblem assemble(const PDESystem& sys, int d, double eps1, double eps2) {
  sys.validate();
  if (d < 0) throw Error("assemble: negative degree");
  if (eps1 <= 0.0) throw Error("assemble: eps1 must be positive");
  if (eps2 >= 0.0) throw Error("assemble: eps2 must be negative");

  AssembledProblem ap;
  ap.pool = std::make_shared<VarPool>();
  ap.n = sys.n;
  ap.d = d;
  ap.gamma = sys.gamma();
  ap.eps1 = eps1;
  ap.eps2 = eps2;
  ap.interval = {sys.a, sys.b};

  const int n = sys.n;
  const int ds = 2 * d + 2 + ap.gamma;
  const int dm = d + ap.gamma;
  VarPool& pool = *ap.pool;

  ap.sigma_plus = build_sigma_plus(pool, n, d, eps1, ap.interval, "P");
  ap.sigma_zero = build_sigma0(pool, n, ds, sys.D, ap.interval);

  // Negative family on W = (u, u_x, u_xx). The multiplier part only sees
  // (u, u_x): the (3,3) block of K - T is identically zero, which pins the
  // u_xx rows of the multiplier Gram matrix to zero anyway; building them
  // out keeps the cone interior nonempty. The eps2 term sits on the u block
  // alone, which is all the decay argument uses.
  FunctionalTemplate neg =
      build_sigma_general(pool, 3 * n, 2 * n, dm, -eps2, n, ap.interval, "Pm");
  neg.eps = eps2;
  neg.M = -neg.M;
  neg.N = -neg.N;
  ap.sigma_minus = neg;

  ap.psd_blocks = {ap.sigma_plus.P, ap.sigma_plus.Q, ap.sigma_minus.P,
                   ap.sigma_minus.Q};
  for (int id = ap.sigma_zero.first_var;
       id < ap.sigma_zero.first_var + ap.sigma_zero.var_count; ++id)
    ap.free_var_ids.push_back(id);

  ap.kernels = build_kernels(ap.sigma_plus.M, ap.sigma_plus.N, sys);

  ap.equalities = ap.sigma_zero.membership;
  auto eqK = equate(ap.kernels.K, ap.sigma_zero.T + ap.sigma_minus.M, "K");
  auto eqL = equate(ap.kernels.L, ap.sigma_zero.R + ap.sigma_minus.N, "L");
  ap.equalities.insert(ap.equalities.end(), eqK.begin(), eqK.end());
  ap.equalities.insert(ap.equalities.end(), eqL.begin(), eqL.end());
  return ap;
}

}  // namespace pdestab
