#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "pdestab/polymat.hpp"

namespace pdestab {

/// Gauss-Legendre rule on [a, b]; exact for polynomials of degree 2n-1.
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadRule gauss_legendre(int n, double a, double b);

/// Nodes needed to integrate a polynomial of the given degree exactly,
/// with a little headroom.
int nodes_for_degree(int degree);

using VectorFn = std::function<Eigen::VectorXd(double)>;

/// V(w) = int w' M w + int int w(x)' N(x,y) w(y). M, N must be numeric
/// (n x n in x, resp. (x,y)); w is sampled at the quadrature nodes.
double evaluate_functional(const PolyMatrix& M, const PolyMatrix& N,
                           const VectorFn& w, double a, double b, int nquad,
                           int threads = 1);

/// int w(x)' w(x) dx by the same rule.
double l2_norm_sq(const VectorFn& w, double a, double b, int nquad);

/// Quadratic form with a 3n-kernel pair (T, R) against W = (w, w', w'').
double evaluate_functional_3n(const PolyMatrix& T, const PolyMatrix& R,
                              const VectorFn& W, double a, double b, int nquad,
                              int threads = 1);

}  // namespace pdestab
