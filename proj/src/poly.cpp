#include "pdestab/poly.hpp"

#include <cmath>
#include <sstream>

namespace pdestab {

const char* var_name(Var v) {
  switch (v) {
    case Var::x: return "x";
    case Var::y: return "y";
    case Var::z: return "z";
  }
  return "?";
}

std::string VarSet::str() const {
  std::string s = "{";
  for (Var v : {Var::x, Var::y, Var::z}) {
    if (has(v)) {
      if (s.size() > 1) s += ",";
      s += var_name(v);
    }
  }
  return s + "}";
}

Polynomial::Polynomial(VarSet vars, double constant) : vars_(vars) {
  if (constant != 0.0) coeffs_.emplace(Mono{}, LinExpr(constant));
}

Polynomial::Polynomial(VarSet vars, const LinExpr& constant) : vars_(vars) {
  if (!constant.is_zero()) coeffs_.emplace(Mono{}, constant);
}

Polynomial Polynomial::monomial(VarSet vars, Mono m, LinExpr coeff) {
  Polynomial p(vars);
  for (Var v : {Var::x, Var::y, Var::z}) {
    if (m[v] > 0 && !vars.has(v))
      throw Error(std::string("monomial uses undeclared variable ") + var_name(v));
  }
  if (!coeff.is_zero()) p.coeffs_.emplace(m, std::move(coeff));
  return p;
}

Polynomial Polynomial::interval_weight(Var v, double a, double b) {
  // (v - a)(b - v) = -v^2 + (a+b)v - ab
  Polynomial g({v});
  g.set_coeff(Mono::unit(v, 2), LinExpr(-1.0));
  g.set_coeff(Mono::unit(v, 1), LinExpr(a + b));
  g.set_coeff(Mono{}, LinExpr(-a * b));
  return g;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : coeffs_) d = std::max(d, m.total());
  return d;
}

int Polynomial::degree_in(Var v) const {
  int d = 0;
  for (const auto& [m, c] : coeffs_) d = std::max<int>(d, m[v]);
  return d;
}

bool Polynomial::has_decision() const {
  for (const auto& [m, c] : coeffs_)
    if (!c.is_constant()) return true;
  return false;
}

LinExpr Polynomial::coeff(const Mono& m) const {
  auto it = coeffs_.find(m);
  return it == coeffs_.end() ? LinExpr() : it->second;
}

void Polynomial::set_coeff(const Mono& m, LinExpr c) {
  if (c.is_zero())
    coeffs_.erase(m);
  else
    coeffs_[m] = std::move(c);
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  vars_ = vars_.unite(o.vars_);
  for (const auto& [m, c] : o.coeffs_) {
    auto it = coeffs_.find(m);
    if (it == coeffs_.end()) {
      coeffs_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  vars_ = vars_.unite(o.vars_);
  for (const auto& [m, c] : o.coeffs_) {
    auto it = coeffs_.find(m);
    if (it == coeffs_.end()) {
      coeffs_.emplace(m, -c);
    } else {
      it->second -= c;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial r(vars_);
  for (const auto& [m, c] : coeffs_) r.coeffs_.emplace(m, -c);
  return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r(a.vars_.unite(b.vars_));
  for (const auto& [ma, ca] : a.coeffs_) {
    for (const auto& [mb, cb] : b.coeffs_) {
      Mono m;
      m.e[0] = uint8_t(ma.e[0] + mb.e[0]);
      m.e[1] = uint8_t(ma.e[1] + mb.e[1]);
      m.e[2] = uint8_t(ma.e[2] + mb.e[2]);
      LinExpr prod = ca * cb;  // throws if both carry decision variables
      auto it = r.coeffs_.find(m);
      if (it == r.coeffs_.end()) {
        if (!prod.is_zero()) r.coeffs_.emplace(m, std::move(prod));
      } else {
        it->second += prod;
        if (it->second.is_zero()) r.coeffs_.erase(it);
      }
    }
  }
  return r;
}

Polynomial operator*(const Polynomial& a, double s) {
  Polynomial r(a.vars());
  if (s == 0.0) return r;
  for (const auto& [m, c] : a.coeffs()) r.set_coeff(m, c * s);
  return r;
}

void Polynomial::check_declared(Var v, const char* op) const {
  if (!vars_.has(v))
    throw Error(std::string(op) + ": variable " + var_name(v) + " not declared in " +
                vars_.str());
}

Polynomial Polynomial::differentiate(Var v) const {
  check_declared(v, "differentiate");
  Polynomial r(vars_);
  for (const auto& [m, c] : coeffs_) {
    if (m[v] == 0) continue;
    Mono d = m;
    d[v] = uint8_t(m[v] - 1);
    r.coeffs_.emplace(d, c * double(m[v]));
  }
  return r;
}

Polynomial Polynomial::integrate_definite(Var v, double a, double b) const {
  check_declared(v, "integrate_definite");
  Polynomial r(vars_.without(v));
  for (const auto& [m, c] : coeffs_) {
    const int k = m[v];
    const double w = (std::pow(b, k + 1) - std::pow(a, k + 1)) / double(k + 1);
    Mono d = m;
    d[v] = 0;
    LinExpr add = c * w;
    auto it = r.coeffs_.find(d);
    if (it == r.coeffs_.end()) {
      if (!add.is_zero()) r.coeffs_.emplace(d, std::move(add));
    } else {
      it->second += add;
      if (it->second.is_zero()) r.coeffs_.erase(it);
    }
  }
  return r;
}

Polynomial Polynomial::eval_partial(Var v, double value) const {
  check_declared(v, "eval_partial");
  Polynomial r(vars_.without(v));
  for (const auto& [m, c] : coeffs_) {
    Mono d = m;
    d[v] = 0;
    LinExpr add = c * std::pow(value, m[v]);
    auto it = r.coeffs_.find(d);
    if (it == r.coeffs_.end()) {
      if (!add.is_zero()) r.coeffs_.emplace(d, std::move(add));
    } else {
      it->second += add;
      if (it->second.is_zero()) r.coeffs_.erase(it);
    }
  }
  return r;
}

Polynomial Polynomial::swap_vars(Var u, Var v) const {
  check_declared(u, "swap_vars");
  check_declared(v, "swap_vars");
  Polynomial r(vars_);
  for (const auto& [m, c] : coeffs_) {
    Mono d = m;
    std::swap(d[u], d[v]);
    r.coeffs_.emplace(d, c);
  }
  return r;
}

Polynomial Polynomial::rename_var(Var from, Var to) const {
  check_declared(from, "rename_var");
  if (vars_.has(to))
    throw Error(std::string("rename_var: target ") + var_name(to) + " already declared");
  Polynomial r(vars_.without(from).with(to));
  for (const auto& [m, c] : coeffs_) {
    Mono d = m;
    d[to] = d[from];
    d[from] = 0;
    r.coeffs_.emplace(d, c);
  }
  return r;
}

double Polynomial::eval(const std::array<double, 3>& point) const {
  double v = 0.0;
  for (const auto& [m, c] : coeffs_) {
    if (!c.is_constant()) throw Error("eval: polynomial carries decision variables");
    double t = c.constant();
    for (int k = 0; k < 3; ++k)
      for (int p = 0; p < m.e[k]; ++p) t *= point[size_t(k)];
    v += t;
  }
  return v;
}

Polynomial Polynomial::substitute(std::span<const double> values) const {
  Polynomial r(vars_);
  for (const auto& [m, c] : coeffs_) {
    double v = c.eval(values);
    if (v != 0.0) r.coeffs_.emplace(m, LinExpr(v));
  }
  return r;
}

Polynomial Polynomial::pruned(double tol) const {
  double scale = 0.0;
  for (const auto& [m, c] : coeffs_) scale = std::max(scale, c.max_abs());
  Polynomial r(vars_);
  for (const auto& [m, c] : coeffs_) {
    if (scale > 0.0 && c.max_abs() <= tol * scale) continue;
    r.coeffs_.emplace(m, c);
  }
  return r;
}

std::string Polynomial::str() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : coeffs_) {
    if (!first) os << " + ";
    first = false;
    if (c.is_constant())
      os << c.constant();
    else
      os << "<affine>";
    for (Var v : {Var::x, Var::y, Var::z}) {
      if (m[v] > 0) {
        os << "*" << var_name(v);
        if (m[v] > 1) os << "^" << int(m[v]);
      }
    }
  }
  return os.str();
}

}  // namespace pdestab
