#include "pdestab/simulator.hpp"

#include <cmath>

namespace pdestab {

GridOperator discretize(const PDESystem& sys, int Ngrid) {
  sys.validate();
  if (Ngrid < 16) throw Error("discretize: Ngrid must be at least 16");
  GridOperator op;
  op.n = sys.n;
  op.Ngrid = Ngrid;
  op.a = sys.a;
  op.b = sys.b;
  op.h = (sys.b - sys.a) / double(Ngrid - 1);
  const int n = sys.n, N = Ngrid;
  const double h = op.h;

  // Discrete boundary constraints: D acts on (u(a), u(b), u_x(a), u_x(b))
  // with one-sided second-order stencils for the derivative values.
  Eigen::MatrixXd cfull = Eigen::MatrixXd::Zero(4 * n, n * N);
  auto add_cols = [&](int node, const Eigen::MatrixXd& coef) {
    cfull.block(0, node * n, 4 * n, n) += coef;
  };
  add_cols(0, sys.D.block(0, 0, 4 * n, n));          // u(a)
  add_cols(N - 1, sys.D.block(0, n, 4 * n, n));      // u(b)
  const auto Dxa = sys.D.block(0, 2 * n, 4 * n, n);  // u_x(a)
  const auto Dxb = sys.D.block(0, 3 * n, 4 * n, n);  // u_x(b)
  add_cols(0, Dxa * (-3.0 / (2 * h)));
  add_cols(1, Dxa * (4.0 / (2 * h)));
  add_cols(2, Dxa * (-1.0 / (2 * h)));
  add_cols(N - 1, Dxb * (3.0 / (2 * h)));
  add_cols(N - 2, Dxb * (-4.0 / (2 * h)));
  add_cols(N - 3, Dxb * (1.0 / (2 * h)));

  // Solve for the endpoint unknowns in terms of the interior.
  Eigen::MatrixXd Cb(4 * n, 2 * n);
  Cb.leftCols(n) = cfull.block(0, 0, 4 * n, n);
  Cb.rightCols(n) = cfull.block(0, (N - 1) * n, 4 * n, n);
  Eigen::MatrixXd Ci = cfull.block(0, n, 4 * n, n * (N - 2));

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Cb);
  if (cod.rank() != 2 * n)
    throw Error("discretize: boundary conditions do not determine the endpoint "
                "values (rank " +
                std::to_string(cod.rank()) + " of " + std::to_string(2 * n) +
                "); unsupported");
  Eigen::MatrixXd Xmap = cod.solve(-Ci);  // u_bound = Xmap * u_int
  const double mismatch = (Cb * Xmap + Ci).norm() / (1.0 + Ci.norm());
  if (mismatch > 1e-9)
    throw Error("discretize: boundary system is inconsistent with elimination "
                "(residual " +
                std::to_string(mismatch) + "); unsupported");

  op.lift = Eigen::MatrixXd::Zero(n * N, n * (N - 2));
  op.lift.block(n, 0, n * (N - 2), n * (N - 2)).setIdentity();
  op.lift.block(0, 0, n, n * (N - 2)) = Xmap.topRows(n);
  op.lift.block((N - 1) * n, 0, n, n * (N - 2)) = Xmap.bottomRows(n);

  // Interior rows of the right-hand side on the full grid.
  Eigen::MatrixXd Mfull = Eigen::MatrixXd::Zero(n * (N - 2), n * N);
  for (int i = 1; i <= N - 2; ++i) {
    const double x = sys.a + i * h;
    Eigen::MatrixXd Ax = sys.A.eval({x, 0, 0});
    Eigen::MatrixXd Bx = sys.B.eval({x, 0, 0});
    Eigen::MatrixXd Cx = sys.C.eval({x, 0, 0});
    const int r = (i - 1) * n;
    Mfull.block(r, (i - 1) * n, n, n) += Ax / (h * h) - Bx / (2 * h);
    Mfull.block(r, i * n, n, n) += -2.0 * Ax / (h * h) + Cx;
    Mfull.block(r, (i + 1) * n, n, n) += Ax / (h * h) + Bx / (2 * h);
  }
  op.G = Mfull * op.lift;
  return op;
}

double spectral_abscissa(const GridOperator& op) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(op.G, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw Error("spectral_abscissa: eigensolver failed to converge");
  return es.eigenvalues().real().maxCoeff();
}

double numeric_threshold(const std::function<PDESystem(double)>& family,
                         double lo, double hi, double tol, int Ngrid) {
  double flo = spectral_abscissa(discretize(family(lo), Ngrid));
  double fhi = spectral_abscissa(discretize(family(hi), Ngrid));
  if (!(flo < 0.0 && fhi > 0.0))
    throw Error("numeric_threshold: endpoints do not bracket a sign change "
                "(abscissa " +
                std::to_string(flo) + " and " + std::to_string(fhi) + ")");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (spectral_abscissa(discretize(family(mid), Ngrid)) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double grid_l2_norm(const GridOperator& op, const Eigen::VectorXd& full) {
  double s = 0.0;
  for (int i = 0; i < op.Ngrid; ++i) {
    const double w = (i == 0 || i == op.Ngrid - 1) ? 0.5 : 1.0;
    s += w * full.segment(i * op.n, op.n).squaredNorm();
  }
  return std::sqrt(s * op.h);
}

Trajectory simulate(const PDESystem& sys, const Eigen::VectorXd& u0_full,
                    double T, double dt, int Ngrid) {
  if (!(T > 0.0) || !(dt > 0.0)) throw Error("simulate: T and dt must be positive");
  GridOperator op = discretize(sys, Ngrid);
  if (u0_full.size() != op.full_size())
    throw DimensionError("simulate: initial state must live on the full grid");

  const int ni = op.interior_size();
  Eigen::VectorXd u = u0_full.segment(op.n, ni);

  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(ni, ni);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(I - 0.5 * dt * op.G);
  // PartialPivLU has no rank query; guard by checking the solve below.
  Eigen::MatrixXd rhs_op = I + 0.5 * dt * op.G;

  Trajectory tr;
  const int steps = int(std::ceil(T / dt));
  tr.times.reserve(size_t(steps) + 1);
  auto record = [&](double t) {
    Eigen::VectorXd full = op.lift * u;
    tr.times.push_back(t);
    tr.l2_norms.push_back(grid_l2_norm(op, full));
    tr.states.push_back(std::move(full));
  };
  record(0.0);
  for (int k = 1; k <= steps; ++k) {
    Eigen::VectorXd v = lu.solve(rhs_op * u);
    if (!v.allFinite())
      throw Error("simulate: implicit step failed (singular or unstable solve)");
    u = v;
    record(k * dt);
  }
  return tr;
}

}  // namespace pdestab
