#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>

#include "pdestab/polymat.hpp"

namespace pdestab {

enum class BCKind { dirichlet, neumann, mixed_na_db, mixed_da_nb, custom };

/// Boundary-condition shorthand; expands to the 4n x 4n constraint matrix
/// acting on the stacked vector (u(a), u(b), u_x(a), u_x(b)).
struct BCShorthand {
  BCKind kind = BCKind::dirichlet;
  Eigen::MatrixXd matrix;  // only for custom; rows <= 4n, cols == 4n

  static BCShorthand named(const std::string& name);
  static BCShorthand custom(const Eigen::MatrixXd& m) {
    return BCShorthand{BCKind::custom, m};
  }
  std::string name() const;
};

Eigen::MatrixXd expand_bc(const BCShorthand& bc, int n);

/// u_t = A(x) u_xx + B(x) u_x + C(x) u on [a,b] with D (u(a),u(b),u_x(a),u_x(b)) = 0.
struct PDESystem {
  int n = 0;
  double a = 0.0, b = 1.0;
  PolyMatrix A, B, C;      // n x n, variable x only
  Eigen::MatrixXd D;       // 4n x 4n, zero-row padded
  std::optional<BCKind> bc_kind;  // remembered for round-trip when named

  int gamma() const;  // max coefficient degree
  void validate() const;
};

using ParamMap = std::map<std::string, double>;

/// Parse a model document (see docs/model_format.md). Coefficients may be
/// numbers or parameter names bound through `params`.
PDESystem load_model(const std::string& text, const ParamMap& params = {});
std::string save_model(const PDESystem& sys);

/// Built-in systems. Names: schrodinger, example1, example2, example3,
/// example4. Parameterized presets require their parameters in `params`.
PDESystem preset(const std::string& name, const ParamMap& params = {});

/// Parameter names a model document references but `params` does not bind.
std::vector<std::string> model_parameters(const std::string& text);

}  // namespace pdestab
