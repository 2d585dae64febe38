#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "pdestab/linexpr.hpp"

namespace pdestab {

enum class Var : uint8_t { x = 0, y = 1, z = 2 };

const char* var_name(Var v);

/// Set of declared variables, subset of {x, y, z}.
class VarSet {
 public:
  constexpr VarSet() = default;
  constexpr VarSet(std::initializer_list<Var> vs) {
    for (Var v : vs) mask_ |= bit(v);
  }
  static constexpr VarSet none() { return VarSet(); }

  constexpr bool has(Var v) const { return mask_ & bit(v); }
  constexpr int count() const {
    return ((mask_ >> 0) & 1) + ((mask_ >> 1) & 1) + ((mask_ >> 2) & 1);
  }
  constexpr VarSet with(Var v) const { return VarSet(uint8_t(mask_ | bit(v))); }
  constexpr VarSet without(Var v) const { return VarSet(uint8_t(mask_ & ~bit(v))); }
  constexpr VarSet unite(VarSet o) const { return VarSet(uint8_t(mask_ | o.mask_)); }
  constexpr bool operator==(const VarSet&) const = default;

  std::string str() const;

 private:
  explicit constexpr VarSet(uint8_t m) : mask_(m) {}
  static constexpr uint8_t bit(Var v) { return uint8_t(1u << static_cast<int>(v)); }
  uint8_t mask_ = 0;
};

/// Exponent tuple over (x, y, z); undeclared variables hold exponent 0.
struct Mono {
  std::array<uint8_t, 3> e{0, 0, 0};

  int total() const { return e[0] + e[1] + e[2]; }
  uint8_t& operator[](Var v) { return e[static_cast<size_t>(v)]; }
  uint8_t operator[](Var v) const { return e[static_cast<size_t>(v)]; }
  bool operator==(const Mono&) const = default;

  static Mono unit(Var v, int p = 1) {
    Mono m;
    m[v] = static_cast<uint8_t>(p);
    return m;
  }
};

/// Graded lexicographic order: lower total degree first, ties broken with
/// higher x-exponent first, then y, then z. Gives bases 1,x,x^2,... and
/// 1,x,y,x^2,xy,y^2,...
struct GradedLex {
  bool operator()(const Mono& a, const Mono& b) const {
    const int ta = a.total(), tb = b.total();
    if (ta != tb) return ta < tb;
    if (a.e[0] != b.e[0]) return a.e[0] > b.e[0];
    if (a.e[1] != b.e[1]) return a.e[1] > b.e[1];
    return a.e[2] > b.e[2];
  }
};

/// Polynomial over declared variables whose coefficients are affine in the
/// decision variables. Stored sparsely; no stored coefficient is zero.
class Polynomial {
 public:
  using CoeffMap = std::map<Mono, LinExpr, GradedLex>;

  explicit Polynomial(VarSet vars = VarSet::none()) : vars_(vars) {}
  Polynomial(VarSet vars, double constant);
  Polynomial(VarSet vars, const LinExpr& constant);

  static Polynomial monomial(VarSet vars, Mono m, LinExpr coeff);
  /// The weight (x - a)(b - x), positive on the interior of [a, b].
  static Polynomial interval_weight(Var v, double a, double b);

  VarSet vars() const { return vars_; }
  const CoeffMap& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  int degree() const;  // max total degree, 0 for the zero polynomial
  int degree_in(Var v) const;
  bool has_decision() const;

  LinExpr coeff(const Mono& m) const;
  void set_coeff(const Mono& m, LinExpr c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  Polynomial operator-() const;
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, double s);
  friend Polynomial operator*(double s, const Polynomial& a) { return a * s; }

  Polynomial differentiate(Var v) const;
  Polynomial integrate_definite(Var v, double a, double b) const;
  /// Substitute a scalar for one variable; the variable leaves the set.
  Polynomial eval_partial(Var v, double value) const;
  Polynomial swap_vars(Var u, Var v) const;
  /// Rename `from` to `to`; `to` must not be declared.
  Polynomial rename_var(Var from, Var to) const;

  /// Evaluate a fully numeric polynomial at a point (indexed by Var).
  double eval(const std::array<double, 3>& point) const;
  /// Coefficient-wise evaluation of the decision variables.
  Polynomial substitute(std::span<const double> values) const;

  /// Drop coefficients with max_abs <= tol * (largest coefficient scale).
  Polynomial pruned(double tol) const;

  std::string str() const;

 private:
  void check_declared(Var v, const char* op) const;

  VarSet vars_;
  CoeffMap coeffs_;
};

}  // namespace pdestab
