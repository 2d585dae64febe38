#pragma once

#include <memory>

#include "pdestab/polymat.hpp"
#include "pdestab/quadrature.hpp"

namespace pdestab {

struct Interval {
  double a = 0.0, b = 1.0;
};

/// Multiplier-plus-integral functional template
///   V(w) = int w(x)'M(x)w(x) dx + int int w(x)'N(x,y)w(y) dy dx
/// generated by two PSD decision blocks (P, Q); the Q block enters through
/// the interval weight g(x) = (x-a)(b-x), which widens the family to
/// functionals positive on the interval without being positive globally.
struct FunctionalTemplate {
  int n = 0;          // ambient dimension of w
  int d = 0;          // multiplier degree
  double eps = 0.0;   // sign of the family: > 0 positive, < 0 negative
  Interval interval;
  PolyMatrix M;       // n x n in x
  PolyMatrix N;       // n x n in (x, y)
  SymBlockRef P, Q;   // PSD blocks of side keep*(d+1) + n*(d+1)(d+2)/2

  /// Instantiate the template at a numeric assignment of the pool variables.
  PolyMatrix M_at(std::span<const double> values) const { return M.substitute(values); }
  PolyMatrix N_at(std::span<const double> values) const { return N.substitute(values); }
};

/// Side of the PSD blocks for ambient dimension n and degree d.
int sigma_block_side(int n, int d);

/// Family of functionals with V(w) >= eps * ||w||^2 on L2^n(a,b). eps > 0.
FunctionalTemplate build_sigma_plus(VarPool& pool, int n, int d, double eps,
                                    Interval iv, const std::string& prefix = "P");

/// Family with V(w) <= eps * ||w||^2, eps < 0: the negation of a member of
/// the positive family at -eps.
FunctionalTemplate build_sigma_minus(VarPool& pool, int n, int d, double eps,
                                     Interval iv, const std::string& prefix = "Pm");

/// Internal generalization used by the LMI assembly: only the first `keep`
/// coordinates of w enter the pointwise multiplier part (the integral part
/// still sees all n), and the eps identity term is restricted to the leading
/// `eps_dim` coordinates. keep == n, eps_dim == n reproduces the public
/// builders.
FunctionalTemplate build_sigma_general(VarPool& pool, int n, int keep, int d,
                                       double eps, int eps_dim, Interval iv,
                                       const std::string& prefix);

}  // namespace pdestab
