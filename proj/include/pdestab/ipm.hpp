#pragma once

#include "pdestab/kernels.hpp"
#include "pdestab/sdp.hpp"

namespace pdestab {

enum class SolveStatus { Feasible, Infeasible, Unknown };

const char* status_name(SolveStatus s);

struct SolveOptions {
  int max_iter = 60;
  double tol_eq = 1e-7;    // feasibility exit on the relative row residual
  double tol_psd = 1e-7;
  double reg_trace = 1e-6;  // interior-selecting objective weight
  double inf_tol = 1e-8;    // Farkas ray acceptance tolerance
  double step_frac = 0.98;
  int threads = 0;          // 0: all available
  bool verbose = false;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  Certificate cert;               // populated when Feasible
  Eigen::VectorXd farkas_y;       // populated when Infeasible
  int iterations = 0;
  std::string message;
};

/// Dense primal-dual interior-point method (Nesterov-Todd scaling, predictor-
/// corrector) for the canonical feasibility problem. Free scalars are solved
/// as a nonnegative split pair with a small L1 weight. Feasible is returned
/// only once the iterate passes the verifier's residual bound; Infeasible is
/// returned only with an independently re-checked improving ray.
SolveResult solve(const SDPProblem& p, const SolveOptions& opts = {});

}  // namespace pdestab
