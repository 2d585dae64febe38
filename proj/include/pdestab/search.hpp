#pragma once

#include <functional>

#include "pdestab/ipm.hpp"
#include "pdestab/model.hpp"

namespace pdestab {

enum class Verdict { Certified, NotCertified, Unknown };

const char* verdict_name(Verdict v);

struct CheckOptions {
  double eps1 = 1e-3;
  double eps2 = -1e-3;
  SolveOptions solve;
};

struct CheckResult {
  Verdict verdict = Verdict::Unknown;
  SolveResult solve;
  VerifyReport report;  // meaningful when the solver returned a candidate
  std::string message;
};

/// Assemble, canonicalize, solve and verify. Certified is reported only when
/// the verifier passes; a solver Feasible claim that fails verification
/// downgrades to Unknown.
CheckResult check_stability(const PDESystem& sys, int d,
                            const CheckOptions& opts = {});

/// Same, but returning the canonical problem and certificate for file IO.
CheckResult check_stability_full(const PDESystem& sys, int d,
                                 const CheckOptions& opts, Canonical* canon_out);

struct ProbeLog {
  double lambda = 0.0;
  Verdict verdict = Verdict::Unknown;
  int iterations = 0;
  std::string message;
};

struct MarginResult {
  bool ok = false;          // false when lo itself failed to certify
  double lambda_star = 0.0;
  std::vector<ProbeLog> probes;
  std::string message;
};

using Family = std::function<PDESystem(double)>;

/// Largest certifiable parameter by interval subdivision. Unknown probes
/// count as not certified. With jobs > 1 each round evaluates `jobs`
/// interior points concurrently; the result equals the sequential one.
MarginResult margin_bisection(const Family& family, int d, double lo, double hi,
                              double tol, const CheckOptions& opts = {},
                              int jobs = 1);

}  // namespace pdestab
