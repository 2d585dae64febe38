#include "pdestab/polymat.hpp"

#include <algorithm>
#include <sstream>

namespace pdestab {

MonomialVector mono_basis(int d, VarSet vars) {
  if (d < 0) throw Error("mono_basis: negative degree");
  const int nv = vars.count();
  if (nv < 1 || nv > 2)
    throw Error("mono_basis: expected 1 or 2 variables, got " + vars.str());
  MonomialVector mv;
  mv.vars = vars;
  mv.degree = d;
  std::vector<Var> vs;
  for (Var v : {Var::x, Var::y, Var::z})
    if (vars.has(v)) vs.push_back(v);
  if (nv == 1) {
    for (int k = 0; k <= d; ++k) mv.entries.push_back(Mono::unit(vs[0], k));
  } else {
    // graded-lex: degree ascending, first variable's exponent descending
    for (int t = 0; t <= d; ++t)
      for (int i = t; i >= 0; --i) {
        Mono m;
        m[vs[0]] = uint8_t(i);
        m[vs[1]] = uint8_t(t - i);
        mv.entries.push_back(m);
      }
  }
  return mv;
}

PolyMatrix::PolyMatrix(int rows, int cols, VarSet vars)
    : rows_(rows), cols_(cols), vars_(vars) {
  if (rows < 0 || cols < 0) throw DimensionError("PolyMatrix: negative shape");
  entries_.assign(size_t(rows) * size_t(cols), Polynomial(vars));
}

PolyMatrix PolyMatrix::identity(int n, VarSet vars) {
  PolyMatrix m(n, n, vars);
  for (int i = 0; i < n; ++i) m.at(i, i) = Polynomial(vars, 1.0);
  return m;
}

PolyMatrix PolyMatrix::from_numeric(const Eigen::MatrixXd& a, VarSet vars) {
  PolyMatrix m(int(a.rows()), int(a.cols()), vars);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) m.at(int(i), int(j)) = Polynomial(vars, a(i, j));
  return m;
}

void PolyMatrix::set_block(int i0, int j0, const PolyMatrix& b) {
  if (i0 + b.rows() > rows_ || j0 + b.cols() > cols_)
    throw DimensionError("set_block: out of range");
  vars_ = vars_.unite(b.vars());
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) at(i0 + i, j0 + j) = b.at(i, j);
}

PolyMatrix PolyMatrix::block(int i0, int j0, int r, int c) const {
  if (i0 + r > rows_ || j0 + c > cols_) throw DimensionError("block: out of range");
  PolyMatrix b(r, c, vars_);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) b.at(i, j) = at(i0 + i, j0 + j);
  return b;
}

bool PolyMatrix::has_decision() const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [](const Polynomial& p) { return p.has_decision(); });
}

int PolyMatrix::degree() const {
  int d = 0;
  for (const auto& p : entries_) d = std::max(d, p.degree());
  return d;
}

bool PolyMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Polynomial& p) { return p.is_zero(); });
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix t(cols_, rows_, vars_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

PolyMatrix PolyMatrix::operator-() const {
  PolyMatrix r(rows_, cols_, vars_);
  for (size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = -entries_[k];
  return r;
}

PolyMatrix& PolyMatrix::operator+=(const PolyMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix add: shape");
  vars_ = vars_.unite(o.vars_);
  for (size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
  return *this;
}

PolyMatrix& PolyMatrix::operator-=(const PolyMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sub: shape");
  vars_ = vars_.unite(o.vars_);
  for (size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
  return *this;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionError("matmul: inner dimensions " + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.rows()));
  if (a.has_decision() && b.has_decision())
    throw BilinearityError("matmul: both operands carry decision variables");
  PolyMatrix r(a.rows(), b.cols(), a.vars().unite(b.vars()));
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const Polynomial& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < b.cols(); ++j) {
        const Polynomial& bkj = b.at(k, j);
        if (bkj.is_zero()) continue;
        r.at(i, j) += aik * bkj;
      }
    }
  return r;
}

PolyMatrix operator*(const PolyMatrix& a, double s) {
  PolyMatrix r(a.rows(), a.cols(), a.vars());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j) * s;
  return r;
}

#define PDESTAB_MAP_ENTRIES(expr)                                  \
  PolyMatrix r(rows_, cols_, vars_);                               \
  for (size_t k = 0; k < entries_.size(); ++k) {                   \
    r.entries_[k] = entries_[k].expr;                              \
    r.vars_ = r.entries_[k].vars();                                \
  }                                                                \
  return r;

PolyMatrix PolyMatrix::differentiate(Var v) const { PDESTAB_MAP_ENTRIES(differentiate(v)) }
PolyMatrix PolyMatrix::integrate_definite(Var v, double a, double b) const {
  PDESTAB_MAP_ENTRIES(integrate_definite(v, a, b))
}
PolyMatrix PolyMatrix::eval_partial(Var v, double value) const {
  PDESTAB_MAP_ENTRIES(eval_partial(v, value))
}
PolyMatrix PolyMatrix::swap_vars(Var u, Var v) const { PDESTAB_MAP_ENTRIES(swap_vars(u, v)) }
PolyMatrix PolyMatrix::rename_var(Var from, Var to) const {
  PDESTAB_MAP_ENTRIES(rename_var(from, to))
}
PolyMatrix PolyMatrix::substitute(std::span<const double> values) const {
  PDESTAB_MAP_ENTRIES(substitute(values))
}
PolyMatrix PolyMatrix::pruned(double tol) const { PDESTAB_MAP_ENTRIES(pruned(tol)) }

#undef PDESTAB_MAP_ENTRIES

Eigen::MatrixXd PolyMatrix::eval(const std::array<double, 3>& point) const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = at(i, j).eval(point);
  return m;
}

PolyMatrix kron_identity(const MonomialVector& Z, int n) {
  if (n < 1) throw Error("kron_identity: n must be positive");
  return kron_select(Z, Eigen::MatrixXd::Identity(n, n));
}

PolyMatrix kron_select(const MonomialVector& Z, const Eigen::MatrixXd& E) {
  const int r = int(E.rows()), c = int(E.cols());
  PolyMatrix m(Z.size() * r, c, Z.vars);
  for (int k = 0; k < Z.size(); ++k)
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        if (E(i, j) != 0.0)
          m.at(k * r + i, j) =
              Polynomial::monomial(Z.vars, Z.entries[size_t(k)], LinExpr(E(i, j)));
  return m;
}

std::vector<LinearConstraint> equate(const PolyMatrix& lhs, const PolyMatrix& rhs,
                                     const std::string& tag) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
    throw DimensionError("equate: shape mismatch");
  std::vector<LinearConstraint> out;
  for (int i = 0; i < lhs.rows(); ++i)
    for (int j = 0; j < lhs.cols(); ++j) {
      Polynomial diff = lhs.at(i, j) - rhs.at(i, j);
      for (const auto& [m, c] : diff.coeffs()) {
        LinExpr e = c;
        e.prune(kCoeffTol);
        if (e.is_zero()) continue;
        LinearConstraint lc;
        lc.coeffs = e.terms();
        lc.rhs = -e.constant();
        std::ostringstream os;
        os << tag << "[" << i << "," << j << "]";
        for (Var v : {Var::x, Var::y, Var::z})
          if (m[v] > 0) os << " " << var_name(v) << "^" << int(m[v]);
        lc.tag = os.str();
        out.push_back(std::move(lc));
      }
    }
  return out;
}

}  // namespace pdestab
