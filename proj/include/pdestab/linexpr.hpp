#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pdestab/errors.hpp"

namespace pdestab {

/// Affine expression c0 + sum_k coeff_k * v_k over scalar decision variables.
/// Terms are kept sorted by variable id with exact-zero coefficients pruned,
/// so identical expressions have identical representations.
class LinExpr {
 public:
  LinExpr() = default;
  explicit LinExpr(double constant) : constant_(constant) {}
  LinExpr(int var, double coeff) {
    if (coeff != 0.0) terms_.emplace_back(var, coeff);
  }

  static LinExpr variable(int var) { return LinExpr(var, 1.0); }

  double constant() const { return constant_; }
  const std::vector<std::pair<int, double>>& terms() const { return terms_; }

  bool is_constant() const { return terms_.empty(); }
  bool is_zero() const { return terms_.empty() && constant_ == 0.0; }

  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(double s);

  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(LinExpr a, double s) { return a *= s; }
  friend LinExpr operator*(double s, LinExpr a) { return a *= s; }
  LinExpr operator-() const;

  // Product of two affine expressions; at most one operand may carry
  // decision variables, otherwise the result would be quadratic.
  friend LinExpr operator*(const LinExpr& a, const LinExpr& b);

  /// Value under a full assignment (indexed by variable id).
  double eval(std::span<const double> values) const;

  /// max |coefficient| over the constant and all terms.
  double max_abs() const;

  /// Drop terms with |coeff| <= tol * max_abs(). Used when emitting
  /// constraints so roundoff dust cannot become a phantom equation.
  void prune(double tol);

  bool operator==(const LinExpr& o) const {
    return constant_ == o.constant_ && terms_ == o.terms_;
  }

 private:
  double constant_ = 0.0;
  std::vector<std::pair<int, double>> terms_;
};

/// Registry of scalar decision variables. Creation order is the canonical
/// variable order used everywhere downstream (flattening, SDPA export),
/// so construction must be deterministic.
class VarPool {
 public:
  int create(std::string name) {
    names_.push_back(std::move(name));
    return static_cast<int>(names_.size()) - 1;
  }
  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int id) const { return names_.at(static_cast<size_t>(id)); }

 private:
  std::vector<std::string> names_;
};

/// Handle to a symmetric matrix decision block registered in a VarPool.
/// Stores the upper triangle row-major; entry(i,j) == entry(j,i).
struct SymBlockRef {
  std::string name;
  int side = 0;
  int first_var = 0;  // id of entry (0,0)

  int var(int i, int j) const {
    if (i > j) std::swap(i, j);
    return first_var + i * side - i * (i - 1) / 2 + (j - i);
  }
  LinExpr entry(int i, int j) const { return LinExpr::variable(var(i, j)); }
  int var_count() const { return side * (side + 1) / 2; }
};

SymBlockRef register_sym_block(VarPool& pool, const std::string& name, int side);

/// One linear equality over decision variables: sum coeff_k v_k = rhs.
struct LinearConstraint {
  std::vector<std::pair<int, double>> coeffs;  // sorted by var id
  double rhs = 0.0;
  std::string tag;  // human-readable origin, reported by the verifier
};

}  // namespace pdestab
