#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pdestab/poly.hpp"

namespace pdestab {

/// Ordered vector of monomials up to a given total degree (graded-lex).
struct MonomialVector {
  VarSet vars;
  int degree = 0;
  std::vector<Mono> entries;

  int size() const { return static_cast<int>(entries.size()); }
};

/// All monomials of total degree <= d in one or two variables.
MonomialVector mono_basis(int d, VarSet vars);

/// Dense matrix of polynomials; all entries share one declared variable set.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(int rows, int cols, VarSet vars);

  static PolyMatrix identity(int n, VarSet vars);
  static PolyMatrix zero(int rows, int cols, VarSet vars) {
    return PolyMatrix(rows, cols, vars);
  }
  /// Lift a numeric matrix to constant polynomials.
  static PolyMatrix from_numeric(const Eigen::MatrixXd& m, VarSet vars);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  VarSet vars() const { return vars_; }

  Polynomial& at(int i, int j) { return entries_[size_t(i) * size_t(cols_) + size_t(j)]; }
  const Polynomial& at(int i, int j) const {
    return entries_[size_t(i) * size_t(cols_) + size_t(j)];
  }

  /// Overwrite the block with upper-left corner (i0, j0).
  void set_block(int i0, int j0, const PolyMatrix& b);
  PolyMatrix block(int i0, int j0, int r, int c) const;

  bool has_decision() const;
  int degree() const;
  bool is_zero() const;

  PolyMatrix transpose() const;
  PolyMatrix operator-() const;
  PolyMatrix& operator+=(const PolyMatrix& o);
  PolyMatrix& operator-=(const PolyMatrix& o);
  friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) { return a += b; }
  friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) { return a -= b; }
  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix operator*(const PolyMatrix& a, double s);
  friend PolyMatrix operator*(double s, const PolyMatrix& a) { return a * s; }

  PolyMatrix differentiate(Var v) const;
  PolyMatrix integrate_definite(Var v, double a, double b) const;
  PolyMatrix eval_partial(Var v, double value) const;
  PolyMatrix swap_vars(Var u, Var v) const;
  PolyMatrix rename_var(Var from, Var to) const;
  PolyMatrix substitute(std::span<const double> values) const;
  PolyMatrix pruned(double tol) const;

  /// Evaluate a fully numeric polynomial matrix at a point.
  Eigen::MatrixXd eval(const std::array<double, 3>& point) const;

 private:
  int rows_ = 0, cols_ = 0;
  VarSet vars_;
  std::vector<Polynomial> entries_;
};

/// Z otimes I_n: stacks I_n, m1*I_n, m2*I_n, ... for the monomials of Z.
PolyMatrix kron_identity(const MonomialVector& Z, int n);

/// Z otimes E for a numeric selector E; generalizes kron_identity.
PolyMatrix kron_select(const MonomialVector& Z, const Eigen::MatrixXd& E);

/// Coefficient-wise equality lhs == rhs as linear constraints over the
/// decision variables. One constraint per (entry, monomial) present in
/// lhs - rhs; a constraint with no variable terms and nonzero rhs is an
/// infeasible constant constraint and is emitted as such.
std::vector<LinearConstraint> equate(const PolyMatrix& lhs, const PolyMatrix& rhs,
                                     const std::string& tag);

/// Pruning threshold used when emitting constraints: coefficients at or
/// below kCoeffTol relative to the constraint scale are treated as zero.
inline constexpr double kCoeffTol = 1e-12;

}  // namespace pdestab
