#pragma once

#include <memory>

#include "pdestab/functional.hpp"
#include "pdestab/model.hpp"
#include "pdestab/spacing.hpp"

namespace pdestab {

/// Kernels of d/dt V(u(t,.)) against U = (u, u_x, u_xx):
///   d/dt V = int U'K(x)U dx + int int U(x)'L(x,y)U(y) dy dx.
struct DerivativeKernels {
  PolyMatrix K;  // 3n x 3n in x
  PolyMatrix L;  // 3n x 3n in (x, y)
};

/// Substitute u_t = A u_xx + B u_x + C u into the derivative of the
/// functional with multiplier M and kernel N.
DerivativeKernels build_kernels(const PolyMatrix& M, const PolyMatrix& N,
                                const PDESystem& sys);

/// The assembled stability feasibility problem: every constraint is linear
/// in the decision variables, every cone constraint is a PSD block.
struct AssembledProblem {
  std::shared_ptr<VarPool> pool;
  std::vector<SymBlockRef> psd_blocks;        // P, Q, Pm, Qm in this order
  std::vector<int> free_var_ids;              // spacing coefficients
  std::vector<LinearConstraint> equalities;   // kernel matching + membership

  // metadata
  int n = 0, d = 0, gamma = 0;
  double eps1 = 0.0, eps2 = 0.0;
  Interval interval;

  // symbolic templates, kept for certificate un-flattening and diagnostics
  FunctionalTemplate sigma_plus;   // (M, N)
  FunctionalTemplate sigma_minus;  // (H, G)
  SpacingTemplate sigma_zero;      // (T, R)
  DerivativeKernels kernels;       // (K, L)
};

/// Build the full problem: (M,N) positive at eps1, (T,R) spacing at degree
/// 2d+2+gamma, (H,G) negative at eps2 with the multiplier part restricted to
/// (u, u_x) and the eps2 identity on the u block only (see README), and the
/// coefficient matching K == T + H, L == R + G.
AssembledProblem assemble(const PDESystem& sys, int d, double eps1, double eps2);

}  // namespace pdestab
