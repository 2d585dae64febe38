#include "pdestab/quadrature.hpp"

#include <cmath>

#include "pdestab/kernels.hpp"

namespace pdestab {

QuadRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw Error("gauss_legendre: need at least one node");
  QuadRule q;
  q.nodes.resize(size_t(n));
  q.weights.resize(size_t(n));
  // Newton on P_n with the standard asymptotic initial guess.
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0, p1;
    for (int iter = 0; iter < 100; ++iter) {
      p0 = 1.0;
      p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = t;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (t * p1 - p0) / (t * t - 1.0);
    q.nodes[size_t(i)] = 0.5 * (b - a) * t + 0.5 * (a + b);
    q.weights[size_t(i)] = (b - a) / ((1.0 - t * t) * dp * dp);
  }
  return q;
}

int nodes_for_degree(int degree) {
  int n = degree / 2 + 2;
  return std::max(n, 4);
}

double evaluate_functional(const PolyMatrix& M, const PolyMatrix& N,
                           const VectorFn& w, double a, double b, int nquad,
                           int threads) {
  if (M.has_decision() || N.has_decision())
    throw Error("evaluate_functional: kernels must be numeric");
  if (M.rows() != M.cols() || N.rows() != N.cols() || M.rows() != N.rows())
    throw DimensionError("evaluate_functional: kernel shapes");
  const int n = M.rows();
  QuadRule q = gauss_legendre(nquad, a, b);

  std::vector<Eigen::VectorXd> ws(static_cast<size_t>(nquad));
  for (int i = 0; i < nquad; ++i) {
    ws[size_t(i)] = w(q.nodes[size_t(i)]);
    if (ws[size_t(i)].size() != n)
      throw DimensionError("evaluate_functional: sample dimension");
  }

  return kernels::quad_form_sum(M, N, q, ws, threads);
}

double l2_norm_sq(const VectorFn& w, double a, double b, int nquad) {
  QuadRule q = gauss_legendre(nquad, a, b);
  double s = 0.0;
  for (int i = 0; i < nquad; ++i) {
    Eigen::VectorXd v = w(q.nodes[size_t(i)]);
    s += q.weights[size_t(i)] * v.squaredNorm();
  }
  return s;
}

double evaluate_functional_3n(const PolyMatrix& T, const PolyMatrix& R,
                              const VectorFn& W, double a, double b, int nquad,
                              int threads) {
  return evaluate_functional(T, R, W, a, b, nquad, threads);
}

}  // namespace pdestab
