#pragma once

#include <functional>

#include "pdestab/model.hpp"

namespace pdestab {

/// Finite-difference discretization of the PDE right-hand side with the
/// boundary constraints eliminated. Node-major layout: component c at node i
/// sits at index i*n + c; the interior excludes the two endpoint nodes.
struct GridOperator {
  int n = 0, Ngrid = 0;
  double a = 0.0, b = 0.0, h = 0.0;
  Eigen::MatrixXd G;      // interior dynamics, side n*(Ngrid-2)
  Eigen::MatrixXd lift;   // full grid values from interior values

  int interior_size() const { return n * (Ngrid - 2); }
  int full_size() const { return n * Ngrid; }
};

/// Second-order central differences; one-sided second-order stencils close
/// the boundary derivative values. The 4n discrete boundary equations are
/// solved for the endpoint unknowns; an unsolvable or rank-deficient system
/// is reported as unsupported.
GridOperator discretize(const PDESystem& sys, int Ngrid);

/// Max real part of the eigenvalues of the interior operator.
double spectral_abscissa(const GridOperator& op);

/// Bisect the abscissa sign over a parameter family. Requires a sign change
/// between lo and hi.
double numeric_threshold(const std::function<PDESystem(double)>& family,
                         double lo, double hi, double tol, int Ngrid);

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;  // full grid
  std::vector<double> l2_norms;         // trapezoid rule on the grid
};

/// Implicit trapezoidal time stepping from a full-grid initial state.
Trajectory simulate(const PDESystem& sys, const Eigen::VectorXd& u0_full,
                    double T, double dt, int Ngrid);

/// Trapezoid-rule L2 norm of a full-grid state.
double grid_l2_norm(const GridOperator& op, const Eigen::VectorXd& full);

}  // namespace pdestab
