#include "pdestab/linexpr.hpp"

#include <algorithm>

namespace pdestab {

namespace {

// Merge two sorted term lists with `sign` applied to the second.
std::vector<std::pair<int, double>> merge(
    const std::vector<std::pair<int, double>>& a,
    const std::vector<std::pair<int, double>>& b, double sign) {
  std::vector<std::pair<int, double>> out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, sign * b[j].second);
      ++j;
    } else {
      double v = a[i].second + sign * b[j].second;
      if (v != 0.0) out.emplace_back(a[i].first, v);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  constant_ += o.constant_;
  if (!o.terms_.empty()) terms_ = merge(terms_, o.terms_, 1.0);
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
  constant_ -= o.constant_;
  if (!o.terms_.empty()) terms_ = merge(terms_, o.terms_, -1.0);
  return *this;
}

LinExpr& LinExpr::operator*=(double s) {
  if (s == 0.0) {
    constant_ = 0.0;
    terms_.clear();
    return *this;
  }
  constant_ *= s;
  for (auto& [id, v] : terms_) v *= s;
  return *this;
}

LinExpr LinExpr::operator-() const {
  LinExpr r(*this);
  r *= -1.0;
  return r;
}

LinExpr operator*(const LinExpr& a, const LinExpr& b) {
  if (!a.is_constant() && !b.is_constant()) {
    throw BilinearityError(
        "product of two decision-bearing expressions is not affine");
  }
  if (a.is_constant()) {
    LinExpr r(b);
    r *= a.constant();
    return r;
  }
  LinExpr r(a);
  r *= b.constant();
  return r;
}

double LinExpr::eval(std::span<const double> values) const {
  double v = constant_;
  for (const auto& [id, c] : terms_) v += c * values[static_cast<size_t>(id)];
  return v;
}

double LinExpr::max_abs() const {
  double m = std::abs(constant_);
  for (const auto& [id, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void LinExpr::prune(double tol) {
  const double cut = tol * max_abs();
  if (cut == 0.0) return;
  std::erase_if(terms_, [cut](const auto& t) { return std::abs(t.second) <= cut; });
  if (std::abs(constant_) <= cut) constant_ = 0.0;
}

SymBlockRef register_sym_block(VarPool& pool, const std::string& name, int side) {
  SymBlockRef ref;
  ref.name = name;
  ref.side = side;
  ref.first_var = pool.size();
  for (int i = 0; i < side; ++i)
    for (int j = i; j < side; ++j)
      pool.create(name + "[" + std::to_string(i) + "," + std::to_string(j) + "]");
  return ref;
}

}  // namespace pdestab
