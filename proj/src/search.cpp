#include "pdestab/search.hpp"

#include <omp.h>

#include <algorithm>

namespace pdestab {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "certified";
    case Verdict::NotCertified: return "not-certified";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

CheckResult check_stability_full(const PDESystem& sys, int d,
                                 const CheckOptions& opts, Canonical* canon_out) {
  CheckResult out;
  AssembledProblem ap = assemble(sys, d, opts.eps1, opts.eps2);
  Canonical canon = canonicalize(ap);
  out.solve = solve(canon.problem, opts.solve);
  switch (out.solve.status) {
    case SolveStatus::Feasible: {
      out.report = verify(out.solve.cert, canon.problem, opts.solve.tol_psd,
                          opts.solve.tol_eq);
      // Certified stands or falls with the independent verifier.
      out.verdict = out.report.pass ? Verdict::Certified : Verdict::Unknown;
      out.message = out.report.summary();
      break;
    }
    case SolveStatus::Infeasible:
      out.verdict = Verdict::NotCertified;
      out.message = out.solve.message;
      break;
    case SolveStatus::Unknown:
      out.verdict = Verdict::Unknown;
      out.message = out.solve.message;
      break;
  }
  if (canon_out) *canon_out = std::move(canon);
  return out;
}

CheckResult check_stability(const PDESystem& sys, int d, const CheckOptions& opts) {
  return check_stability_full(sys, d, opts, nullptr);
}

MarginResult margin_bisection(const Family& family, int d, double lo, double hi,
                              double tol, const CheckOptions& opts, int jobs) {
  if (!(hi > lo)) throw Error("margin_bisection: requires hi > lo");
  if (tol <= 0.0) throw Error("margin_bisection: requires tol > 0");
  jobs = std::max(1, jobs);

  MarginResult res;
  auto probe = [&](double lambda) {
    CheckResult c = check_stability(family(lambda), d, opts);
    ProbeLog log;
    log.lambda = lambda;
    log.verdict = c.verdict;
    log.iterations = c.solve.iterations;
    log.message = c.message;
    return log;
  };

  ProbeLog at_lo = probe(lo);
  res.probes.push_back(at_lo);
  if (at_lo.verdict != Verdict::Certified) {
    res.ok = false;
    res.message = "lower endpoint not certifiable; no bisection performed";
    return res;
  }
  ProbeLog at_hi = probe(hi);
  res.probes.push_back(at_hi);
  if (at_hi.verdict == Verdict::Certified) {
    res.ok = true;
    res.lambda_star = hi;
    res.message = "upper endpoint already certified";
    return res;
  }

  while (hi - lo > tol) {
    // jobs interior points per round; jobs == 1 is plain bisection
    std::vector<double> mids(static_cast<size_t>(jobs));
    for (int k = 0; k < jobs; ++k)
      mids[size_t(k)] = lo + (hi - lo) * double(k + 1) / double(jobs + 1);
    std::vector<ProbeLog> logs(static_cast<size_t>(jobs));
    if (jobs == 1) {
      logs[0] = probe(mids[0]);
    } else {
      CheckOptions inner = opts;
      inner.solve.threads = 1;  // probes own the parallelism this round
#pragma omp parallel for schedule(static) num_threads(jobs)
      for (int k = 0; k < jobs; ++k) {
        CheckResult c = check_stability(family(mids[size_t(k)]), d, inner);
        logs[size_t(k)] = {mids[size_t(k)], c.verdict, c.solve.iterations,
                           c.message};
      }
    }
    double new_lo = lo, new_hi = hi;
    for (int k = 0; k < jobs; ++k) {
      res.probes.push_back(logs[size_t(k)]);
      if (logs[size_t(k)].verdict == Verdict::Certified)
        new_lo = std::max(new_lo, logs[size_t(k)].lambda);
    }
    for (int k = 0; k < jobs; ++k)
      if (logs[size_t(k)].verdict != Verdict::Certified &&
          logs[size_t(k)].lambda > new_lo)
        new_hi = std::min(new_hi, logs[size_t(k)].lambda);
    lo = new_lo;
    hi = new_hi;
  }
  res.ok = true;
  res.lambda_star = lo;
  res.message = "bracketed to tolerance";
  return res;
}

}  // namespace pdestab
