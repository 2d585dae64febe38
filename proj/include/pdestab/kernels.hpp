#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pdestab/polymat.hpp"

namespace pdestab {
struct QuadRule;
}

namespace pdestab::kernels {

/// Hot loops ship in two forms: an OpenMP version used in production and a
/// serial reference used by the tests and the benchmark. Parallel variants
/// use static partitioning with a fixed accumulation order per element, so
/// results are deterministic for a given thread count and agree with the
/// reference to tight tolerances.

int max_threads();

// ---- quadrature ----------------------------------------------------------

/// sum_i qw_i w_i'M(x_i)w_i + sum_{i,j} qw_i qw_j w_i'N(x_i,x_j)w_j
double quad_form_sum(const PolyMatrix& M, const PolyMatrix& N, const QuadRule& q,
                     const std::vector<Eigen::VectorXd>& ws, int threads);
double quad_form_sum_serial(const PolyMatrix& M, const PolyMatrix& N,
                            const QuadRule& q,
                            const std::vector<Eigen::VectorXd>& ws);

// ---- dense Cholesky ------------------------------------------------------

/// Blocked left-to-right Cholesky, lower triangle in place. Returns false on
/// a non-positive pivot. The upper triangle is left unspecified.
bool cholesky_inplace(Eigen::MatrixXd& A, int threads);
/// Eigen LLT, kept as the reference implementation.
bool cholesky_reference(Eigen::MatrixXd& A);

/// Solve L L' x = b in place given the factor from cholesky_inplace.
void cholesky_solve(const Eigen::MatrixXd& L, Eigen::VectorXd& b);

// ---- Schur complement formation -----------------------------------------

/// Constraints restricted to one PSD block. Triplets store the coefficient
/// on X_ij (i <= j) of the symmetric matrix variable, i.e. the constraint
/// value is sum tv * X(ti,tj). As a symmetric inner product <A, X> the
/// off-diagonal matrix entries are tv/2 on both sides.
struct BlockConstraints {
  int side = 0;
  std::vector<int> active;    // global constraint indices touching the block
  std::vector<int> ptr;       // size active.size()+1, ranges into triplets
  std::vector<int> ti, tj;    // ti <= tj
  std::vector<double> tv;
};

/// H(gi,gj) += <A_i, W A_j W> over the block's active constraints, upper
/// triangle (gi <= gj) only.
void schur_psd(const BlockConstraints& bc, const Eigen::MatrixXd& W,
               Eigen::MatrixXd& H, int threads);
void schur_psd_serial(const BlockConstraints& bc, const Eigen::MatrixXd& W,
                      Eigen::MatrixXd& H);

/// V = W A W for one constraint of the block (test/benchmark helper).
Eigen::MatrixXd congruence_one(const BlockConstraints& bc, int k,
                               const Eigen::MatrixXd& W);

}  // namespace pdestab::kernels
