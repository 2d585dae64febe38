#include "pdestab/ipm.hpp"

#include <cmath>
#include <cstdio>
#include <map>

namespace pdestab {

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unknown: return "unknown";
  }
  return "?";
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Internal conic form: the problem's PSD blocks plus one nonnegative block
// of size 2*n_free holding the split x = x+ - x-.
struct Conic {
  const SDPProblem* p = nullptr;
  int m = 0;       // retained equality rows
  int nlp = 0;     // 2 * n_free
  std::vector<int> keep;  // retained row -> original row index
  VectorXd b;

  std::vector<kernels::BlockConstraints> bc;  // per PSD block
  // LP triplets per retained row, and per-column lists for the Schur form
  std::vector<int> lp_ptr, lp_idx;
  std::vector<double> lp_val;
  std::vector<std::vector<std::pair<int, double>>> lp_cols;
};

struct PresolveOutcome {
  bool infeasible = false;
  int bad_row = -1;
};

// Drop empty and duplicate rows; detect constant contradictions.
PresolveOutcome build_conic(const SDPProblem& p, Conic& c) {
  c.p = &p;
  c.nlp = 2 * p.n_free;
  PresolveOutcome out;

  std::map<std::pair<std::vector<int>, std::vector<int64_t>>, std::pair<int, double>>
      seen;  // (cols, quantized vals) -> (row, rhs)
  for (int i = 0; i < p.rows(); ++i) {
    const int k0 = p.row_ptr[size_t(i)], k1 = p.row_ptr[size_t(i) + 1];
    if (k0 == k1) {
      if (std::abs(p.rhs[size_t(i)]) > 1e-12) {
        out.infeasible = true;
        out.bad_row = i;
        return out;
      }
      continue;  // 0 == 0
    }
    std::vector<int> cols(p.col.begin() + k0, p.col.begin() + k1);
    std::vector<int64_t> q;
    q.reserve(cols.size());
    for (int k = k0; k < k1; ++k)
      q.push_back(int64_t(std::llround(p.val[size_t(k)] * 281474976710656.0)));
    auto key = std::make_pair(std::move(cols), std::move(q));
    auto it = seen.find(key);
    if (it != seen.end()) {
      if (std::abs(it->second.second - p.rhs[size_t(i)]) > 1e-11) {
        out.infeasible = true;  // same left side, different right side
        out.bad_row = i;
      }
      continue;
    }
    seen.emplace(std::move(key), std::make_pair(i, p.rhs[size_t(i)]));
    c.keep.push_back(i);
  }
  if (out.infeasible) return out;

  c.m = int(c.keep.size());
  c.b.resize(c.m);
  for (int r = 0; r < c.m; ++r) c.b[r] = p.rhs[size_t(c.keep[size_t(r)])];

  c.bc.resize(p.blocks.size());
  for (size_t bi = 0; bi < p.blocks.size(); ++bi) {
    c.bc[bi].side = p.blocks[bi].side;
    c.bc[bi].ptr.push_back(0);
  }
  c.lp_ptr.push_back(0);
  c.lp_cols.assign(size_t(c.nlp), {});

  for (int r = 0; r < c.m; ++r) {
    const int i = c.keep[size_t(r)];
    for (int k = p.row_ptr[size_t(i)]; k < p.row_ptr[size_t(i) + 1]; ++k) {
      const int f = p.col[size_t(k)];
      const double v = p.val[size_t(k)];
      if (f >= p.free_offset) {
        const int fk = f - p.free_offset;
        c.lp_idx.push_back(2 * fk);
        c.lp_val.push_back(v);
        c.lp_idx.push_back(2 * fk + 1);
        c.lp_val.push_back(-v);
        c.lp_cols[size_t(2 * fk)].emplace_back(r, v);
        c.lp_cols[size_t(2 * fk + 1)].emplace_back(r, -v);
      } else {
        int bi = 0;
        while (bi + 1 < int(p.blocks.size()) && f >= p.blocks[size_t(bi) + 1].offset)
          ++bi;
        const auto& blk = p.blocks[size_t(bi)];
        int t = f - blk.offset;
        int row = 0;
        while (t >= blk.side - row) {
          t -= blk.side - row;
          ++row;
        }
        auto& B = c.bc[size_t(bi)];
        if (B.active.empty() || B.active.back() != r) {
          B.active.push_back(r);
          B.ptr.push_back(B.ptr.back());
        }
        B.ti.push_back(row);
        B.tj.push_back(row + t);
        B.tv.push_back(v);
        ++B.ptr.back();
      }
    }
    c.lp_ptr.push_back(int(c.lp_idx.size()));
  }
  return out;
}

// ---- linear maps ----------------------------------------------------------

// value of each retained row at (X, xlp)
VectorXd apply_A(const Conic& c, const std::vector<MatrixXd>& X, const VectorXd& xlp) {
  VectorXd out = VectorXd::Zero(c.m);
  for (size_t bi = 0; bi < c.bc.size(); ++bi) {
    const auto& B = c.bc[bi];
    for (size_t a = 0; a < B.active.size(); ++a) {
      double s = 0.0;
      for (int t = B.ptr[a]; t < B.ptr[a + 1]; ++t)
        s += B.tv[size_t(t)] * X[bi](B.ti[size_t(t)], B.tj[size_t(t)]);
      out[B.active[a]] += s;
    }
  }
  for (int r = 0; r < c.m; ++r)
    for (int k = c.lp_ptr[size_t(r)]; k < c.lp_ptr[size_t(r) + 1]; ++k)
      out[r] += c.lp_val[size_t(k)] * xlp[c.lp_idx[size_t(k)]];
  return out;
}

// adjoint: accumulate sum_r y_r A_r into dense blocks and the LP vector
void apply_At(const Conic& c, const VectorXd& y, std::vector<MatrixXd>& S,
              VectorXd& slp) {
  for (size_t bi = 0; bi < c.bc.size(); ++bi) {
    const auto& B = c.bc[bi];
    S[bi].setZero();
    for (size_t a = 0; a < B.active.size(); ++a) {
      const double w = y[B.active[a]];
      if (w == 0.0) continue;
      for (int t = B.ptr[a]; t < B.ptr[a + 1]; ++t) {
        const int i = B.ti[size_t(t)], j = B.tj[size_t(t)];
        const double v = B.tv[size_t(t)] * w;
        if (i == j) {
          S[bi](i, i) += v;
        } else {
          S[bi](i, j) += 0.5 * v;
          S[bi](j, i) += 0.5 * v;
        }
      }
    }
  }
  slp.setZero();
  for (int r = 0; r < c.m; ++r) {
    const double w = y[r];
    if (w == 0.0) continue;
    for (int k = c.lp_ptr[size_t(r)]; k < c.lp_ptr[size_t(r) + 1]; ++k)
      slp[c.lp_idx[size_t(k)]] += c.lp_val[size_t(k)] * w;
  }
}

// <A_r, V> for every active row of one block
void accumulate_rows(const kernels::BlockConstraints& B, const MatrixXd& V,
                     VectorXd& out) {
  for (size_t a = 0; a < B.active.size(); ++a) {
    double s = 0.0;
    for (int t = B.ptr[a]; t < B.ptr[a + 1]; ++t) {
      const int i = B.ti[size_t(t)], j = B.tj[size_t(t)];
      const double v = B.tv[size_t(t)];
      s += (i == j) ? v * V(i, i) : 0.5 * v * (V(i, j) + V(j, i));
    }
    out[B.active[a]] += s;
  }
}

// ---- NT scaling -----------------------------------------------------------

struct Scaling {
  MatrixXd R, Rinv, W;  // W = R R'
  VectorXd lam;
};

Scaling nt_scaling(const MatrixXd& X, const MatrixXd& Z) {
  Scaling s;
  Eigen::LLT<MatrixXd> lx(X), lz(Z);
  if (lx.info() != Eigen::Success || lz.info() != Eigen::Success)
    throw Error("nt_scaling: iterate left the cone");
  MatrixXd Lx = lx.matrixL();
  MatrixXd Lz = lz.matrixL();
  Eigen::JacobiSVD<MatrixXd> svd(Lz.transpose() * Lx,
                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
  s.lam = svd.singularValues();
  VectorXd il = s.lam.cwiseSqrt().cwiseInverse();
  s.R = Lx * svd.matrixV() * il.asDiagonal();
  // R^{-1} = sqrt(Lam) V' Lx^{-1}
  MatrixXd Lxi = MatrixXd::Identity(X.rows(), X.cols());
  Lx.triangularView<Eigen::Lower>().solveInPlace(Lxi);
  s.Rinv = s.lam.cwiseSqrt().asDiagonal() * svd.matrixV().transpose() * Lxi;
  s.W = s.R * s.R.transpose();
  return s;
}

// largest alpha with X + alpha dX staying PSD (up to the given fraction)
double max_step(const MatrixXd& X, const MatrixXd& dX) {
  Eigen::LLT<MatrixXd> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  MatrixXd L = llt.matrixL();
  MatrixXd M = dX;
  L.triangularView<Eigen::Lower>().solveInPlace(M);
  MatrixXd Mt = M.transpose();
  L.triangularView<Eigen::Lower>().solveInPlace(Mt);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(Mt, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin >= 0.0) return 1e30;
  return -1.0 / lmin;
}

double max_step_lp(const VectorXd& x, const VectorXd& dx) {
  double a = 1e30;
  for (int i = 0; i < x.size(); ++i)
    if (dx[i] < 0.0) a = std::min(a, -x[i] / dx[i]);
  return a;
}

}  // namespace

SolveResult solve(const SDPProblem& p, const SolveOptions& opts) {
  SolveResult res;
  const int threads = opts.threads > 0 ? opts.threads : kernels::max_threads();

  Conic c;
  PresolveOutcome pre = build_conic(p, c);
  if (pre.infeasible) {
    res.status = SolveStatus::Infeasible;
    res.farkas_y = VectorXd::Zero(p.rows());
    // a contradictory row is its own improving ray
    res.farkas_y[pre.bad_row] = (p.rhs[size_t(pre.bad_row)] > 0.0) ? 1.0 : -1.0;
    res.message = "contradictory constraint: " + p.tags[size_t(pre.bad_row)];
    return res;
  }
  const int nb = int(c.bc.size());

  // trivial case: nothing to do
  if (c.m == 0) {
    res.status = SolveStatus::Feasible;
    res.cert.values.assign(size_t(p.total_vars()), 0.0);
    for (size_t bi = 0; bi < p.blocks.size(); ++bi) {
      const auto& blk = p.blocks[bi];
      for (int i = 0; i < blk.side; ++i)
        res.cert.values[size_t(blk.flat(i, i))] = 1.0;
    }
    res.cert.solver_status = "trivially feasible";
    res.message = "no constraints";
    return res;
  }

  // objective: small trace weight selects a well-centered interior point
  const double creg = opts.reg_trace;

  // initial point
  double bscale = std::max(1.0, c.b.lpNorm<Eigen::Infinity>());
  const double tau = 10.0 * bscale;
  std::vector<MatrixXd> X(nb), Z(nb);
  for (int bi = 0; bi < nb; ++bi) {
    const int s = c.bc[size_t(bi)].side;
    X[size_t(bi)] = tau * MatrixXd::Identity(s, s);
    Z[size_t(bi)] = std::max(1.0, creg) * MatrixXd::Identity(s, s);
  }
  VectorXd xlp = VectorXd::Constant(c.nlp, tau);
  VectorXd zlp = VectorXd::Constant(c.nlp, std::max(1.0, creg));
  VectorXd y = VectorXd::Zero(c.m);

  double nu = double(c.nlp);
  for (int bi = 0; bi < nb; ++bi) nu += c.bc[size_t(bi)].side;
  nu = std::max(nu, 1.0);

  std::vector<MatrixXd> Sd(nb), Rd(nb), Rc(nb), dX(nb), dZ(nb), WRdW(nb);
  for (int bi = 0; bi < nb; ++bi) {
    const int s = c.bc[size_t(bi)].side;
    for (auto* m : {&Sd, &Rd, &Rc, &dX, &dZ, &WRdW})
      (*m)[size_t(bi)].setZero(s, s);
  }
  VectorXd slp(c.nlp), rdlp(c.nlp), rclp(c.nlp), dxlp(c.nlp), dzlp(c.nlp),
      wrdwlp(c.nlp);

  MatrixXd H(c.m, c.m), Hfact(c.m, c.m);
  auto full_values = [&]() {
    std::vector<double> vals(size_t(p.total_vars()), 0.0);
    for (size_t bi = 0; bi < p.blocks.size(); ++bi) {
      const auto& blk = p.blocks[bi];
      for (int i = 0; i < blk.side; ++i)
        for (int j = i; j < blk.side; ++j)
          vals[size_t(blk.flat(i, j))] = X[bi](i, j);
    }
    for (int f = 0; f < p.n_free; ++f)
      vals[size_t(p.free_offset + f)] = xlp[2 * f] - xlp[2 * f + 1];
    return vals;
  };

  std::string stall_reason = "iteration limit";
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    res.iterations = iter;

    // feasibility exit on the original rows, gated by the verifier's bound
    {
      std::vector<double> vals = full_values();
      const double r = p.residual(vals);
      if (r <= 0.5 * opts.tol_eq) {
        res.status = SolveStatus::Feasible;
        res.cert.values = std::move(vals);
        res.cert.max_residual = r;
        res.cert.solver_status = "interior point, residual " + std::to_string(r);
        for (int bi = 0; bi < nb; ++bi) {
          Eigen::SelfAdjointEigenSolver<MatrixXd> es(X[size_t(bi)],
                                                     Eigen::EigenvaluesOnly);
          res.cert.block_min_eig.push_back(es.eigenvalues().minCoeff());
        }
        res.message = "feasible after " + std::to_string(iter) + " iterations";
        return res;
      }
    }

    // Farkas ray test: by > 0 with A*(y) <= 0 proves primal infeasibility.
    {
      const double by = c.b.dot(y);
      if (by > 1e-10) {
        VectorXd yh = y / by;
        apply_At(c, yh, Sd, slp);
        double worst = slp.size() ? slp.maxCoeff() : 0.0;
        for (int bi = 0; bi < nb; ++bi) {
          Eigen::SelfAdjointEigenSolver<MatrixXd> es(Sd[size_t(bi)],
                                                     Eigen::EigenvaluesOnly);
          worst = std::max(worst, es.eigenvalues().maxCoeff());
        }
        const double yscale = 1.0 + yh.lpNorm<Eigen::Infinity>();
        if (worst <= opts.inf_tol * yscale) {
          res.status = SolveStatus::Infeasible;
          res.farkas_y = VectorXd::Zero(p.rows());
          for (int r = 0; r < c.m; ++r) res.farkas_y[c.keep[size_t(r)]] = yh[r];
          res.message = "dual improving ray, max eigenvalue " + std::to_string(worst);
          return res;
        }
      }
    }

    // residuals
    VectorXd rp = c.b - apply_A(c, X, xlp);
    apply_At(c, y, Sd, slp);
    double mu = xlp.dot(zlp);
    for (int bi = 0; bi < nb; ++bi) {
      const int s = c.bc[size_t(bi)].side;
      Rd[size_t(bi)] = creg * MatrixXd::Identity(s, s) - Sd[size_t(bi)] - Z[size_t(bi)];
      mu += X[size_t(bi)].cwiseProduct(Z[size_t(bi)]).sum();
    }
    mu /= nu;
    rdlp = VectorXd::Constant(c.nlp, creg) - slp - zlp;

    if (opts.verbose) {
      std::printf("  it %2d mu %9.2e rp %9.2e by %9.2e\n", iter, mu,
                  rp.lpNorm<Eigen::Infinity>(), c.b.dot(y));
    }
    if (mu < 1e-13 * std::max(1.0, tau)) {
      stall_reason = "complementarity vanished without a feasible point";
      break;
    }

    // NT scalings
    std::vector<Scaling> sc(static_cast<size_t>(nb));
    bool scale_ok = true;
    for (int bi = 0; bi < nb; ++bi) {
      try {
        sc[size_t(bi)] = nt_scaling(X[size_t(bi)], Z[size_t(bi)]);
      } catch (const Error&) {
        scale_ok = false;
      }
    }
    if (!scale_ok) {
      stall_reason = "scaling breakdown";
      break;
    }
    VectorXd wlp = (xlp.array() / zlp.array()).sqrt().matrix();
    VectorXd lamlp = (xlp.array() * zlp.array()).sqrt().matrix();

    // Schur complement
    H.setZero();
    for (int bi = 0; bi < nb; ++bi)
      kernels::schur_psd(c.bc[size_t(bi)], sc[size_t(bi)].W, H, threads);
    for (int k = 0; k < c.nlp; ++k) {
      const double d = wlp[k] * wlp[k];
      const auto& colk = c.lp_cols[size_t(k)];
      for (size_t a = 0; a < colk.size(); ++a)
        for (size_t b2 = a; b2 < colk.size(); ++b2) {
          const auto [ra, va] = colk[a];
          const auto [rb, vb] = colk[b2];
          H(std::min(ra, rb), std::max(ra, rb)) += d * va * vb;
        }
    }
    H.diagonal().array() += 1e-12 * (1.0 + H.diagonal().maxCoeff());
    Hfact = H.selfadjointView<Eigen::Upper>();
    if (!kernels::cholesky_inplace(Hfact, threads)) {
      // bump the ridge a few times before giving up
      bool ok = false;
      double ridge = 1e-9 * (1.0 + H.diagonal().maxCoeff());
      for (int attempt = 0; attempt < 3 && !ok; ++attempt, ridge *= 100.0) {
        Hfact = H.selfadjointView<Eigen::Upper>();
        Hfact.diagonal().array() += ridge;
        ok = kernels::cholesky_inplace(Hfact, threads);
      }
      if (!ok) {
        stall_reason = "Schur complement factorization failed";
        break;
      }
    }
    auto schur_solve = [&](const VectorXd& rhs) {
      VectorXd d = rhs;
      kernels::cholesky_solve(Hfact, d);
      // one step of iterative refinement against the unfactored matrix
      VectorXd resid = rhs - H.selfadjointView<Eigen::Upper>() * d;
      kernels::cholesky_solve(Hfact, resid);
      d += resid;
      return d;
    };

    // direction for a given complementarity target Rc
    auto compute_direction = [&](bool corrector) {
      VectorXd rhs = rp;
      for (int bi = 0; bi < nb; ++bi) {
        WRdW[size_t(bi)].noalias() =
            sc[size_t(bi)].W * Rd[size_t(bi)] * sc[size_t(bi)].W;
        accumulate_rows(c.bc[size_t(bi)], WRdW[size_t(bi)] - Rc[size_t(bi)], rhs);
      }
      wrdwlp = wlp.array().square() * rdlp.array();
      for (int r = 0; r < c.m; ++r)
        for (int k = c.lp_ptr[size_t(r)]; k < c.lp_ptr[size_t(r) + 1]; ++k)
          rhs[r] += c.lp_val[size_t(k)] *
                    (wrdwlp[c.lp_idx[size_t(k)]] - rclp[c.lp_idx[size_t(k)]]);
      VectorXd dy = schur_solve(rhs);
      // dZ = Rd - A*(dy); dX = Rc - W dZ W
      apply_At(c, dy, Sd, slp);
      for (int bi = 0; bi < nb; ++bi) {
        dZ[size_t(bi)] = Rd[size_t(bi)] - Sd[size_t(bi)];
        dX[size_t(bi)].noalias() =
            Rc[size_t(bi)] - sc[size_t(bi)].W * dZ[size_t(bi)] * sc[size_t(bi)].W;
      }
      dzlp = rdlp - slp;
      dxlp = rclp.array() - wlp.array().square() * dzlp.array();
      (void)corrector;
      return dy;
    };

    // predictor: linearized complementarity target 0, i.e. Rc = -X
    for (int bi = 0; bi < nb; ++bi) Rc[size_t(bi)] = -X[size_t(bi)];
    rclp = -xlp;
    compute_direction(false);

    double ap = 1.0, ad = 1.0;
    for (int bi = 0; bi < nb; ++bi) {
      ap = std::min(ap, max_step(X[size_t(bi)], dX[size_t(bi)]));
      ad = std::min(ad, max_step(Z[size_t(bi)], dZ[size_t(bi)]));
    }
    ap = std::min(ap, max_step_lp(xlp, dxlp));
    ad = std::min(ad, max_step_lp(zlp, dzlp));
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);

    double mu_aff = (xlp + ap * dxlp).dot(zlp + ad * dzlp);
    for (int bi = 0; bi < nb; ++bi)
      mu_aff += (X[size_t(bi)] + ap * dX[size_t(bi)])
                    .cwiseProduct(Z[size_t(bi)] + ad * dZ[size_t(bi)])
                    .sum();
    mu_aff = std::max(mu_aff / nu, 0.0);
    double sigma = std::pow(mu_aff / mu, 3.0);
    sigma = std::min(1.0, std::max(sigma, 1e-10));

    // corrector: target sigma*mu with the Mehrotra second-order term,
    // assembled in the scaled space where both variables equal diag(lam)
    for (int bi = 0; bi < nb; ++bi) {
      const auto& s = sc[size_t(bi)];
      const int n = int(s.lam.size());
      MatrixXd dxh = s.Rinv * dX[size_t(bi)] * s.Rinv.transpose();
      MatrixXd dzh = s.R.transpose() * dZ[size_t(bi)] * s.R;
      MatrixXd corr = dxh * dzh;
      MatrixXd St(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double sij = (i == j ? sigma * mu - s.lam[i] * s.lam[i] : 0.0) -
                             0.5 * (corr(i, j) + corr(j, i));
          St(i, j) = 2.0 * sij / (s.lam[i] + s.lam[j]);
        }
      Rc[size_t(bi)].noalias() = s.R * St * s.R.transpose();
    }
    {
      Eigen::ArrayXd dxh = dxlp.array() / wlp.array();
      Eigen::ArrayXd dzh = dzlp.array() * wlp.array();
      rclp = (wlp.array() * (sigma * mu - lamlp.array().square() - dxh * dzh) /
              lamlp.array())
                 .matrix();
    }
    VectorXd dy = compute_direction(true);

    ap = 1e30;
    ad = 1e30;
    for (int bi = 0; bi < nb; ++bi) {
      ap = std::min(ap, max_step(X[size_t(bi)], dX[size_t(bi)]));
      ad = std::min(ad, max_step(Z[size_t(bi)], dZ[size_t(bi)]));
    }
    ap = std::min(ap, max_step_lp(xlp, dxlp));
    ad = std::min(ad, max_step_lp(zlp, dzlp));
    ap = std::min(1.0, opts.step_frac * ap);
    ad = std::min(1.0, opts.step_frac * ad);

    if (ap < 1e-10 && ad < 1e-10) {
      stall_reason = "step length collapsed";
      break;
    }

    for (int bi = 0; bi < nb; ++bi) {
      X[size_t(bi)] += ap * dX[size_t(bi)];
      Z[size_t(bi)] += ad * dZ[size_t(bi)];
      // keep exact symmetry
      X[size_t(bi)] = 0.5 * (X[size_t(bi)] + X[size_t(bi)].transpose()).eval();
      Z[size_t(bi)] = 0.5 * (Z[size_t(bi)] + Z[size_t(bi)].transpose()).eval();
    }
    xlp += ap * dxlp;
    zlp += ad * dzlp;
    y += ad * dy;
  }

  res.status = SolveStatus::Unknown;
  res.message = stall_reason;
  return res;
}

}  // namespace pdestab
