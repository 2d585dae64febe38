#include "pdestab/model.hpp"

#include <json.hpp>
#include <set>

namespace pdestab {

using json = nlohmann::ordered_json;

BCShorthand BCShorthand::named(const std::string& name) {
  BCShorthand bc;
  if (name == "dirichlet")
    bc.kind = BCKind::dirichlet;
  else if (name == "neumann")
    bc.kind = BCKind::neumann;
  else if (name == "mixed_na_db")
    bc.kind = BCKind::mixed_na_db;
  else if (name == "mixed_da_nb")
    bc.kind = BCKind::mixed_da_nb;
  else
    throw SchemaError("unknown boundary shorthand '" + name + "'");
  return bc;
}

std::string BCShorthand::name() const {
  switch (kind) {
    case BCKind::dirichlet: return "dirichlet";
    case BCKind::neumann: return "neumann";
    case BCKind::mixed_na_db: return "mixed_na_db";
    case BCKind::mixed_da_nb: return "mixed_da_nb";
    case BCKind::custom: return "custom";
  }
  return "?";
}

Eigen::MatrixXd expand_bc(const BCShorthand& bc, int n) {
  if (n < 1) throw Error("expand_bc: n must be positive");
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(4 * n, 4 * n);
  auto I = Eigen::MatrixXd::Identity(n, n);
  switch (bc.kind) {
    case BCKind::dirichlet:  // u(a) = u(b) = 0
      d.block(0, 0, n, n) = I;
      d.block(n, n, n, n) = I;
      break;
    case BCKind::neumann:  // u_x(a) = u_x(b) = 0
      d.block(2 * n, 2 * n, n, n) = I;
      d.block(3 * n, 3 * n, n, n) = I;
      break;
    case BCKind::mixed_na_db:  // u_x(a) = 0, u(b) = 0
      d.block(n, n, n, n) = I;
      d.block(2 * n, 2 * n, n, n) = I;
      break;
    case BCKind::mixed_da_nb:  // u(a) = 0, u_x(b) = 0
      d.block(0, 0, n, n) = I;
      d.block(3 * n, 3 * n, n, n) = I;
      break;
    case BCKind::custom: {
      if (bc.matrix.cols() != 4 * n)
        throw SchemaError("custom boundary matrix must have 4n columns");
      if (bc.matrix.rows() > 4 * n)
        throw SchemaError("custom boundary matrix has more than 4n rows");
      d.topRows(bc.matrix.rows()) = bc.matrix;
      break;
    }
  }
  return d;
}

int PDESystem::gamma() const {
  return std::max({A.degree(), B.degree(), C.degree()});
}

void PDESystem::validate() const {
  if (n < 1) throw SchemaError("state dimension must be positive");
  if (!(a < b)) throw SchemaError("interval requires a < b");
  for (const PolyMatrix* m : {&A, &B, &C}) {
    if (m->rows() != n || m->cols() != n)
      throw SchemaError("coefficient matrices must be n x n");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const auto& p = m->at(i, j);
        if (p.degree_in(Var::y) > 0 || p.degree_in(Var::z) > 0 || p.has_decision())
          throw SchemaError("coefficients must be numeric polynomials in x");
      }
  }
  if (D.rows() != 4 * n || D.cols() != 4 * n)
    throw SchemaError("boundary matrix must be 4n x 4n after padding");
}

namespace {

PolyMatrix parse_coeff_matrix(const json& jm, int n, const ParamMap& params,
                              const char* which, std::set<std::string>* unbound) {
  if (!jm.is_array() || int(jm.size()) != n)
    throw SchemaError(std::string(which) + " must be an n x n array");
  PolyMatrix m(n, n, {Var::x});
  for (int i = 0; i < n; ++i) {
    const json& row = jm[size_t(i)];
    if (!row.is_array() || int(row.size()) != n)
      throw SchemaError(std::string(which) + " must be an n x n array");
    for (int j = 0; j < n; ++j) {
      const json& entry = row[size_t(j)];
      if (!entry.is_array())
        throw SchemaError(std::string(which) +
                          " entries must be coefficient arrays (ascending powers)");
      Polynomial p({Var::x});
      for (size_t k = 0; k < entry.size(); ++k) {
        const json& c = entry[k];
        double v = 0.0;
        if (c.is_number()) {
          v = c.get<double>();
        } else if (c.is_string()) {
          auto it = params.find(c.get<std::string>());
          if (it == params.end()) {
            if (unbound) {
              unbound->insert(c.get<std::string>());
              continue;
            }
            throw SchemaError("unbound parameter '" + c.get<std::string>() + "' in " +
                              which);
          }
          v = it->second;
        } else {
          throw SchemaError(std::string(which) +
                            " coefficients must be numbers or parameter names");
        }
        if (v != 0.0) p.set_coeff(Mono::unit(Var::x, int(k)), LinExpr(v));
      }
      m.at(i, j) = p;
    }
  }
  return m;
}

json dump_coeff_matrix(const PolyMatrix& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) {
      const Polynomial& p = m.at(i, j);
      json entry = json::array();
      const int d = p.degree_in(Var::x);
      for (int k = 0; k <= d; ++k) {
        LinExpr c = p.coeff(Mono::unit(Var::x, k));
        entry.push_back(c.constant());
      }
      if (p.is_zero()) entry = json::array({0.0});
      row.push_back(entry);
    }
    out.push_back(row);
  }
  return out;
}

PDESystem from_json(const json& j, const ParamMap& params) {
  for (const char* key : {"n", "a", "b", "A", "B", "C", "bc"})
    if (!j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  PDESystem sys;
  if (!j["n"].is_number_integer()) throw SchemaError("n must be an integer");
  sys.n = j["n"].get<int>();
  if (sys.n < 1) throw SchemaError("state dimension must be positive");
  sys.a = j["a"].get<double>();
  sys.b = j["b"].get<double>();
  sys.A = parse_coeff_matrix(j["A"], sys.n, params, "A", nullptr);
  sys.B = parse_coeff_matrix(j["B"], sys.n, params, "B", nullptr);
  sys.C = parse_coeff_matrix(j["C"], sys.n, params, "C", nullptr);

  const json& jbc = j["bc"];
  if (jbc.is_string()) {
    BCShorthand bc = BCShorthand::named(jbc.get<std::string>());
    sys.D = expand_bc(bc, sys.n);
    sys.bc_kind = bc.kind;
  } else if (jbc.is_array()) {
    const int rows = int(jbc.size());
    Eigen::MatrixXd m(rows, 4 * sys.n);
    for (int i = 0; i < rows; ++i) {
      const json& row = jbc[size_t(i)];
      if (!row.is_array() || int(row.size()) != 4 * sys.n)
        throw SchemaError("bc matrix rows must have 4n entries");
      for (int c = 0; c < 4 * sys.n; ++c) m(i, c) = row[size_t(c)].get<double>();
    }
    sys.D = expand_bc(BCShorthand::custom(m), sys.n);
    sys.bc_kind = std::nullopt;
  } else {
    throw SchemaError("bc must be a shorthand string or a matrix");
  }
  sys.validate();
  return sys;
}

}  // namespace

PDESystem load_model(const std::string& text, const ParamMap& params) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw SchemaError(std::string("model document is not valid JSON: ") + e.what());
  }
  return from_json(j, params);
}

std::vector<std::string> model_parameters(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw SchemaError(std::string("model document is not valid JSON: ") + e.what());
  }
  std::set<std::string> unbound;
  if (j.contains("n") && j["n"].is_number_integer()) {
    const int n = j["n"].get<int>();
    for (const char* key : {"A", "B", "C"})
      if (j.contains(key)) parse_coeff_matrix(j[key], n, {}, key, &unbound);
  }
  return {unbound.begin(), unbound.end()};
}

std::string save_model(const PDESystem& sys) {
  json j;
  j["n"] = sys.n;
  j["a"] = sys.a;
  j["b"] = sys.b;
  j["A"] = dump_coeff_matrix(sys.A);
  j["B"] = dump_coeff_matrix(sys.B);
  j["C"] = dump_coeff_matrix(sys.C);
  if (sys.bc_kind) {
    BCShorthand bc;
    bc.kind = *sys.bc_kind;
    j["bc"] = bc.name();
  } else {
    json rows = json::array();
    for (int i = 0; i < sys.D.rows(); ++i) {
      json row = json::array();
      for (int c = 0; c < sys.D.cols(); ++c) row.push_back(sys.D(i, c));
      rows.push_back(row);
    }
    j["bc"] = rows;
  }
  return j.dump(2) + "\n";
}

namespace {

double require_param(const ParamMap& params, const std::string& name,
                     const std::string& preset_name) {
  auto it = params.find(name);
  if (it == params.end())
    throw Error("preset '" + preset_name + "' requires parameter '" + name + "'");
  return it->second;
}

Polynomial upoly(std::initializer_list<double> ascending) {
  Polynomial p({Var::x});
  int k = 0;
  for (double c : ascending) {
    if (c != 0.0) p.set_coeff(Mono::unit(Var::x, k), LinExpr(c));
    ++k;
  }
  return p;
}

}  // namespace

PDESystem preset(const std::string& name, const ParamMap& params) {
  PDESystem sys;
  sys.n = 2;
  sys.a = 0.0;
  sys.b = 1.0;
  const VarSet vx{Var::x};
  if (name == "example1") {
    const double lambda = require_param(params, "lambda", name);
    sys.A = PolyMatrix::identity(2, vx);
    sys.B = PolyMatrix::zero(2, 2, vx);
    Eigen::MatrixXd c(2, 2);
    c << lambda, 0, 0, lambda;
    sys.C = PolyMatrix::from_numeric(c, vx);
    sys.bc_kind = BCKind::dirichlet;
  } else if (name == "example2") {
    const double lambda = require_param(params, "lambda", name);
    sys.A = PolyMatrix::identity(2, vx);
    sys.B = PolyMatrix::zero(2, 2, vx);
    Eigen::MatrixXd c(2, 2);
    c << lambda, 1, 1, lambda;
    sys.C = PolyMatrix::from_numeric(c, vx);
    sys.bc_kind = BCKind::dirichlet;
  } else if (name == "example3") {
    const double lambda = require_param(params, "lambda", name);
    sys.A = PolyMatrix::identity(2, vx);
    sys.B = PolyMatrix::zero(2, 2, vx);
    Eigen::MatrixXd c(2, 2);
    c << lambda, lambda, lambda, lambda;
    sys.C = PolyMatrix::from_numeric(c, vx);
    sys.bc_kind = BCKind::mixed_na_db;
  } else if (name == "example4") {
    sys.A = PolyMatrix(2, 2, vx);
    sys.A.at(0, 0) = upoly({4, 0, 5});
    sys.A.at(1, 0) = upoly({0, 7, 2});
    sys.A.at(1, 1) = upoly({6, 0, 7});
    sys.B = PolyMatrix(2, 2, vx);
    sys.B.at(0, 0) = upoly({1});
    sys.B.at(0, 1) = upoly({0, -4});
    sys.B.at(1, 0) = upoly({0, 0, -3.5});
    sys.C = PolyMatrix(2, 2, vx);
    sys.C.at(0, 0) = upoly({0, 0, -1});
    sys.C.at(0, 1) = upoly({-3});
    sys.C.at(1, 0) = upoly({0, -2});
    sys.C.at(1, 1) = upoly({0, 0, -3});
    sys.bc_kind = BCKind::dirichlet;
  } else if (name == "schrodinger") {
    const double hbar = require_param(params, "hbar", name);
    const double mass = require_param(params, "mass", name);
    const double v0 = require_param(params, "v0", name);
    Eigen::MatrixXd a(2, 2), c(2, 2);
    a << 0, -hbar / mass, hbar / mass, 0;
    c << 0, v0 / hbar, -v0 / hbar, 0;
    sys.A = PolyMatrix::from_numeric(a, vx);
    sys.B = PolyMatrix::zero(2, 2, vx);
    sys.C = PolyMatrix::from_numeric(c, vx);
    sys.bc_kind = BCKind::dirichlet;
  } else {
    throw Error("unknown preset '" + name + "'");
  }
  BCShorthand bc;
  bc.kind = *sys.bc_kind;
  sys.D = expand_bc(bc, sys.n);
  sys.validate();
  return sys;
}

}  // namespace pdestab
