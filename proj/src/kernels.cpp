#include "pdestab/kernels.hpp"

#include <omp.h>

#include <cmath>

#include "pdestab/quadrature.hpp"

namespace pdestab::kernels {

int max_threads() { return omp_get_max_threads(); }

namespace {

// N evaluated on the tensor grid once; the double sum then reads the cache.
struct NCache {
  int n = 0, nq = 0;
  std::vector<Eigen::MatrixXd> at;  // nq*nq entries, row-major (i,j)
};

NCache cache_kernel(const PolyMatrix& N, const QuadRule& q) {
  NCache c;
  c.n = N.rows();
  c.nq = int(q.nodes.size());
  c.at.resize(size_t(c.nq) * size_t(c.nq));
  for (int i = 0; i < c.nq; ++i)
    for (int j = 0; j < c.nq; ++j)
      c.at[size_t(i) * size_t(c.nq) + size_t(j)] =
          N.eval({q.nodes[size_t(i)], q.nodes[size_t(j)], 0.0});
  return c;
}

}  // namespace

double quad_form_sum_serial(const PolyMatrix& M, const PolyMatrix& N,
                            const QuadRule& q,
                            const std::vector<Eigen::VectorXd>& ws) {
  const int nq = int(q.nodes.size());
  double acc = 0.0;
  for (int i = 0; i < nq; ++i) {
    Eigen::MatrixXd Mi = M.eval({q.nodes[size_t(i)], 0.0, 0.0});
    acc += q.weights[size_t(i)] * ws[size_t(i)].dot(Mi * ws[size_t(i)]);
  }
  if (!N.is_zero()) {
    NCache c = cache_kernel(N, q);
    for (int i = 0; i < nq; ++i) {
      double row = 0.0;
      for (int j = 0; j < nq; ++j)
        row += q.weights[size_t(j)] *
               ws[size_t(i)].dot(c.at[size_t(i) * size_t(nq) + size_t(j)] * ws[size_t(j)]);
      acc += q.weights[size_t(i)] * row;
    }
  }
  return acc;
}

double quad_form_sum(const PolyMatrix& M, const PolyMatrix& N, const QuadRule& q,
                     const std::vector<Eigen::VectorXd>& ws, int threads) {
  if (threads <= 1) return quad_form_sum_serial(M, N, q, ws);
  const int nq = int(q.nodes.size());
  std::vector<double> partial(size_t(nq), 0.0);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int i = 0; i < nq; ++i) {
    Eigen::MatrixXd Mi = M.eval({q.nodes[size_t(i)], 0.0, 0.0});
    partial[size_t(i)] =
        q.weights[size_t(i)] * ws[size_t(i)].dot(Mi * ws[size_t(i)]);
  }
  if (!N.is_zero()) {
    NCache c = cache_kernel(N, q);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int i = 0; i < nq; ++i) {
      double row = 0.0;
      for (int j = 0; j < nq; ++j)
        row += q.weights[size_t(j)] *
               ws[size_t(i)].dot(c.at[size_t(i) * size_t(nq) + size_t(j)] * ws[size_t(j)]);
      partial[size_t(i)] += q.weights[size_t(i)] * row;
    }
  }
  double acc = 0.0;
  for (int i = 0; i < nq; ++i) acc += partial[size_t(i)];  // fixed order
  return acc;
}

// ---------------------------------------------------------------------------

bool cholesky_reference(Eigen::MatrixXd& A) {
  Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(A);
  return llt.info() == Eigen::Success;
}

bool cholesky_inplace(Eigen::MatrixXd& A, int threads) {
  const int n = int(A.rows());
  const int nb = 160;
  for (int k = 0; k < n; k += nb) {
    const int kb = std::min(nb, n - k);
    // diagonal panel
    {
      Eigen::Ref<Eigen::MatrixXd> Akk = A.block(k, k, kb, kb);
      Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(Akk);
      if (llt.info() != Eigen::Success) return false;
    }
    const int rest = n - k - kb;
    if (rest == 0) continue;
    // column panel: B := B * Lkk^{-T}, row blocks independent
    {
      const int rb = 128;
      const int nblocks = (rest + rb - 1) / rb;
#pragma omp parallel for schedule(static) num_threads(threads)
      for (int b = 0; b < nblocks; ++b) {
        const int r0 = k + kb + b * rb;
        const int rs = std::min(rb, n - r0);
        Eigen::Ref<Eigen::MatrixXd> B = A.block(r0, k, rs, kb);
        A.block(k, k, kb, kb)
            .transpose()
            .triangularView<Eigen::Upper>()
            .solveInPlace<Eigen::OnTheRight>(B);
      }
    }
    // trailing update: lower-triangle block pairs, one writer per pair
    {
      const int rb = 128;
      const int nblocks = (rest + rb - 1) / rb;
      const int npairs = nblocks * (nblocks + 1) / 2;
#pragma omp parallel for schedule(static) num_threads(threads)
      for (int p = 0; p < npairs; ++p) {
        // unrank p -> (bi >= bj)
        int bi = int((std::sqrt(8.0 * p + 1.0) - 1.0) / 2.0);
        while (bi * (bi + 1) / 2 > p) --bi;
        while ((bi + 1) * (bi + 2) / 2 <= p) ++bi;
        const int bj = p - bi * (bi + 1) / 2;
        const int i0 = k + kb + bi * rb, j0 = k + kb + bj * rb;
        const int is = std::min(rb, n - i0), js = std::min(rb, n - j0);
        A.block(i0, j0, is, js).noalias() -=
            A.block(i0, k, is, kb) * A.block(j0, k, js, kb).transpose();
      }
    }
  }
  return true;
}

void cholesky_solve(const Eigen::MatrixXd& L, Eigen::VectorXd& b) {
  L.triangularView<Eigen::Lower>().solveInPlace(b);
  L.triangularView<Eigen::Lower>().transpose().solveInPlace(b);
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd congruence_one(const BlockConstraints& bc, int k,
                               const Eigen::MatrixXd& W) {
  const int s = bc.side;
  // distinct rows touched by A_k
  std::vector<int> rows;
  for (int t = bc.ptr[size_t(k)]; t < bc.ptr[size_t(k) + 1]; ++t) {
    rows.push_back(bc.ti[size_t(t)]);
    rows.push_back(bc.tj[size_t(t)]);
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  const int nr = int(rows.size());
  std::vector<int> where(size_t(s), -1);
  for (int r = 0; r < nr; ++r) where[size_t(rows[size_t(r)])] = r;

  // U = A_k W restricted to the touched rows
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(nr, s);
  for (int t = bc.ptr[size_t(k)]; t < bc.ptr[size_t(k) + 1]; ++t) {
    const int i = bc.ti[size_t(t)], j = bc.tj[size_t(t)];
    const double v = bc.tv[size_t(t)];
    if (i == j) {
      U.row(where[size_t(i)]) += v * W.row(i);
    } else {
      U.row(where[size_t(i)]) += 0.5 * v * W.row(j);
      U.row(where[size_t(j)]) += 0.5 * v * W.row(i);
    }
  }
  // V = W(:,rows) * U
  Eigen::MatrixXd Wsub(s, nr);
  for (int r = 0; r < nr; ++r) Wsub.col(r) = W.col(rows[size_t(r)]);
  return Wsub * U;
}

namespace {

inline double dot_constraint(const BlockConstraints& bc, int k,
                             const Eigen::MatrixXd& V) {
  double acc = 0.0;
  for (int t = bc.ptr[size_t(k)]; t < bc.ptr[size_t(k) + 1]; ++t) {
    const int i = bc.ti[size_t(t)], j = bc.tj[size_t(t)];
    const double v = bc.tv[size_t(t)];
    acc += (i == j) ? v * V(i, i) : 0.5 * v * (V(i, j) + V(j, i));
  }
  return acc;
}

}  // namespace

void schur_psd_serial(const BlockConstraints& bc, const Eigen::MatrixXd& W,
                      Eigen::MatrixXd& H) {
  const int na = int(bc.active.size());
  for (int b = 0; b < na; ++b) {
    Eigen::MatrixXd V = congruence_one(bc, b, W);
    const int gj = bc.active[size_t(b)];
    for (int a = 0; a <= b; ++a)
      H(bc.active[size_t(a)], gj) += dot_constraint(bc, a, V);
  }
}

void schur_psd(const BlockConstraints& bc, const Eigen::MatrixXd& W,
               Eigen::MatrixXd& H, int threads) {
  if (threads <= 1) {
    schur_psd_serial(bc, W, H);
    return;
  }
  const int na = int(bc.active.size());
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
  for (int b = 0; b < na; ++b) {
    Eigen::MatrixXd V = congruence_one(bc, b, W);
    const int gj = bc.active[size_t(b)];
    for (int a = 0; a <= b; ++a)
      H(bc.active[size_t(a)], gj) += dot_constraint(bc, a, V);
  }
}

}  // namespace pdestab::kernels
