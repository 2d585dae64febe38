#include "pdestab/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace pdestab {

double SDPProblem::residual(std::span<const double> v, int* worst_row) const {
  double worst = 0.0;
  int wr = -1;
  for (int i = 0; i < rows(); ++i) {
    double s = -rhs[size_t(i)];
    for (int k = row_ptr[size_t(i)]; k < row_ptr[size_t(i) + 1]; ++k)
      s += val[size_t(k)] * v[size_t(col[size_t(k)])];
    double r = std::abs(s) / (1.0 + std::abs(rhs[size_t(i)]));
    if (r > worst) {
      worst = r;
      wr = i;
    }
  }
  if (worst_row) *worst_row = wr;
  return worst;
}

Eigen::MatrixXd Certificate::block_matrix(const SDPProblem& p, int block) const {
  const auto& b = p.blocks[size_t(block)];
  Eigen::MatrixXd m(b.side, b.side);
  for (int i = 0; i < b.side; ++i)
    for (int j = i; j < b.side; ++j)
      m(i, j) = m(j, i) = values[size_t(b.flat(i, j))];
  return m;
}

Canonical canonicalize(const AssembledProblem& ap) {
  Canonical c;
  SDPProblem& p = c.problem;
  c.pool_to_flat.assign(size_t(ap.pool->size()), -1);

  int offset = 0;
  for (const SymBlockRef& ref : ap.psd_blocks) {
    SDPProblem::Block b;
    b.name = ref.name;
    b.side = ref.side;
    b.offset = offset;
    for (int t = 0; t < ref.var_count(); ++t)
      c.pool_to_flat[size_t(ref.first_var + t)] = offset + t;
    offset += b.var_count();
    p.blocks.push_back(b);
  }
  p.free_offset = offset;
  p.n_free = int(ap.free_var_ids.size());
  for (int k = 0; k < p.n_free; ++k)
    c.pool_to_flat[size_t(ap.free_var_ids[size_t(k)])] = offset + k;

  std::vector<std::pair<int, double>> row;
  for (const LinearConstraint& lc : ap.equalities) {
    row.clear();
    for (const auto& [id, v] : lc.coeffs) {
      const int f = c.pool_to_flat[size_t(id)];
      if (f < 0) throw Error("canonicalize: constraint references unmapped variable");
      row.emplace_back(f, v);
    }
    std::sort(row.begin(), row.end());
    double scale = 0.0;
    for (const auto& [f, v] : row) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) scale = 1.0;
    for (const auto& [f, v] : row) {
      p.col.push_back(f);
      p.val.push_back(v / scale);
    }
    p.rhs.push_back(lc.rhs / scale);
    p.tags.push_back(lc.tag);
    p.row_ptr.push_back(int(p.col.size()));
  }
  return c;
}

std::vector<double> Canonical::pool_values(const Certificate& cert) const {
  std::vector<double> out(pool_to_flat.size(), 0.0);
  for (size_t id = 0; id < pool_to_flat.size(); ++id)
    if (pool_to_flat[id] >= 0) out[id] = cert.values[size_t(pool_to_flat[id])];
  return out;
}

std::string VerifyReport::summary() const {
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL");
  os << " worst_residual=" << worst_residual;
  if (worst_row >= 0) os << " at row " << worst_row << " (" << worst_tag << ")";
  double me = 0.0;
  for (double e : block_min_eig) me = std::min(me, e);
  os << " min_eig=" << me;
  return os.str();
}

VerifyReport verify(const Certificate& cert, const SDPProblem& p, double tol_psd,
                    double tol_eq) {
  if (int(cert.values.size()) != p.total_vars())
    throw DimensionError("verify: certificate length does not match problem");
  VerifyReport rep;
  rep.tol_psd = tol_psd;
  rep.tol_eq = tol_eq;
  bool psd_ok = true;
  for (size_t bi = 0; bi < p.blocks.size(); ++bi) {
    Eigen::MatrixXd m = cert.block_matrix(p, int(bi));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m,
                                                      Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error("verify: eigensolver failed");
    const double mineig = es.eigenvalues().minCoeff();
    rep.block_min_eig.push_back(mineig);
    const double scale = 1.0 + m.norm();
    if (mineig < -tol_psd * scale) {
      psd_ok = false;
      if (rep.worst_block < 0) rep.worst_block = int(bi);
    }
  }
  int wr = -1;
  rep.worst_residual = p.residual(cert.values, &wr);
  rep.worst_row = wr;
  if (wr >= 0) rep.worst_tag = p.tags[size_t(wr)];
  rep.pass = psd_ok && rep.worst_residual <= tol_eq;
  return rep;
}

// ---------------------------------------------------------------------------
// SDPA sparse export / solution import

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void export_sdpa(const SDPProblem& p, std::ostream& os) {
  os << "* pdestab sdpa sparse export\n";
  os << p.rows() << "\n";
  const int nblocks = int(p.blocks.size()) + (p.n_free > 0 ? 1 : 0);
  os << nblocks << "\n";
  {
    bool first = true;
    for (const auto& b : p.blocks) {
      os << (first ? "" : " ") << b.side;
      first = false;
    }
    if (p.n_free > 0) os << (first ? "" : " ") << -(2 * p.n_free);
    os << "\n";
  }
  {
    for (int i = 0; i < p.rows(); ++i) os << (i ? " " : "") << fmt(-p.rhs[size_t(i)]);
    os << "\n";
  }
  // F0 = 0: no entries. F_i = -A_i, upper triangle, 1-based indices.
  for (int i = 0; i < p.rows(); ++i) {
    for (int k = p.row_ptr[size_t(i)]; k < p.row_ptr[size_t(i) + 1]; ++k) {
      const int f = p.col[size_t(k)];
      const double v = p.val[size_t(k)];
      if (f >= p.free_offset) {
        // split pair on the trailing diagonal block
        const int k0 = f - p.free_offset;
        const int blk = int(p.blocks.size()) + 1;
        os << i + 1 << " " << blk << " " << 2 * k0 + 1 << " " << 2 * k0 + 1 << " "
           << fmt(-v) << "\n";
        os << i + 1 << " " << blk << " " << 2 * k0 + 2 << " " << 2 * k0 + 2 << " "
           << fmt(v) << "\n";
        continue;
      }
      // locate the block
      int bi = 0;
      while (bi + 1 < int(p.blocks.size()) &&
             f >= p.blocks[size_t(bi) + 1].offset)
        ++bi;
      const auto& b = p.blocks[size_t(bi)];
      // invert flat index to (r, c), r <= c
      int t = f - b.offset;
      int r = 0;
      while (t >= b.side - r) {
        t -= b.side - r;
        ++r;
      }
      const int cidx = r + t;
      const double entry = (r == cidx) ? v : v / 2.0;  // matrix entry of A_i
      os << i + 1 << " " << bi + 1 << " " << r + 1 << " " << cidx + 1 << " "
         << fmt(-entry) << "\n";
    }
  }
}

void export_sdpa_file(const SDPProblem& p, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("export_sdpa: cannot open " + path);
  export_sdpa(p, os);
  if (!os) throw Error("export_sdpa: write failure on " + path);
}

namespace {

// Pull every number out of a brace-delimited region, ignoring punctuation.
std::vector<double> numbers_after(const std::string& text, const std::string& key) {
  const size_t pos = text.find(key);
  if (pos == std::string::npos) return {};
  std::vector<double> out;
  size_t i = text.find('{', pos);
  if (i == std::string::npos) return {};
  int depth = 0;
  std::string tok;
  auto flush = [&] {
    if (!tok.empty()) {
      out.push_back(std::strtod(tok.c_str(), nullptr));
      tok.clear();
    }
  };
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '{') {
      ++depth;
    } else if (ch == '}') {
      flush();
      if (--depth == 0) break;
    } else if ((ch >= '0' && ch <= '9') || ch == '+' || ch == '-' || ch == '.' ||
               ch == 'e' || ch == 'E') {
      tok += ch;
    } else {
      flush();
    }
  }
  return out;
}

}  // namespace

Certificate import_solution(const SDPProblem& p, const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("import_solution: cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  const std::string text = ss.str();

  Certificate cert;
  cert.solver_status = "imported";
  if (text.find("yMat") != std::string::npos) {
    std::vector<double> nums = numbers_after(text, "yMat");
    // full matrices per PSD block, then the split diagonal block
    size_t expect = 0;
    for (const auto& b : p.blocks) expect += size_t(b.side) * size_t(b.side);
    expect += size_t(2 * p.n_free);
    if (nums.size() != expect)
      throw Error("import_solution: yMat has " + std::to_string(nums.size()) +
                  " values, expected " + std::to_string(expect));
    cert.values.assign(size_t(p.total_vars()), 0.0);
    size_t k = 0;
    for (const auto& b : p.blocks) {
      for (int i = 0; i < b.side; ++i)
        for (int j = 0; j < b.side; ++j, ++k)
          if (i <= j) cert.values[size_t(b.flat(i, j))] = nums[k];
    }
    for (int f = 0; f < p.n_free; ++f) {
      const double plus = nums[k++], minus = nums[k++];
      cert.values[size_t(p.free_offset + f)] = plus - minus;
    }
    return cert;
  }
  // plain whitespace vector in canonical order
  std::istringstream ns(text);
  double v;
  while (ns >> v) cert.values.push_back(v);
  if (int(cert.values.size()) != p.total_vars())
    throw Error("import_solution: expected " + std::to_string(p.total_vars()) +
                " values, got " + std::to_string(cert.values.size()));
  return cert;
}

void save_certificate(const Certificate& cert, const SDPProblem& p,
                      const std::string& path) {
  nlohmann::ordered_json j;
  j["format"] = "pdestab-certificate-v1";
  j["total_vars"] = p.total_vars();
  nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
  for (const auto& b : p.blocks) {
    blocks.push_back({{"name", b.name}, {"side", b.side}});
  }
  j["blocks"] = blocks;
  j["n_free"] = p.n_free;
  j["solver_status"] = cert.solver_status;
  j["values"] = cert.values;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("save_certificate: cannot open " + path);
  os << j.dump(1) << "\n";
}

Certificate load_certificate(const SDPProblem& p, const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("load_certificate: cannot open " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const std::exception&) {
    return import_solution(p, path);  // fall back to plain-vector form
  }
  Certificate cert;
  cert.solver_status = j.value("solver_status", "loaded");
  cert.values = j.at("values").get<std::vector<double>>();
  if (int(cert.values.size()) != p.total_vars())
    throw Error("load_certificate: value count does not match the problem");
  return cert;
}

}  // namespace pdestab
