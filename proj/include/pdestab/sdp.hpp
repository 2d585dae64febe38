#pragma once

#include <iosfwd>

#include "pdestab/derivative.hpp"

namespace pdestab {

/// Block-diagonal semidefinite feasibility problem in canonical form.
///
/// Scalar unknowns live in one flat vector: first the upper triangles of the
/// PSD blocks (row-major, no off-diagonal scaling), in construction order,
/// then the free scalars. An equality row stores the coefficient on each
/// scalar unknown, i.e. sum_k coeff_k * v_k = rhs where v_k is X(i,j) itself
/// for block entries. Rows are scaled to unit max coefficient.
struct SDPProblem {
  struct Block {
    std::string name;
    int side = 0;
    int offset = 0;  // flat index of entry (0,0)
    int var_count() const { return side * (side + 1) / 2; }
    int flat(int i, int j) const {
      if (i > j) std::swap(i, j);
      return offset + i * side - i * (i - 1) / 2 + (j - i);
    }
  };

  std::vector<Block> blocks;
  int n_free = 0;
  int free_offset = 0;

  // CSR equality rows over flat indices
  std::vector<int> row_ptr{0};
  std::vector<int> col;
  std::vector<double> val;
  std::vector<double> rhs;
  std::vector<std::string> tags;

  int total_vars() const { return free_offset + n_free; }
  int rows() const { return int(rhs.size()); }

  /// max_i |a_i . v - b_i| / (1 + |b_i|)
  double residual(std::span<const double> v, int* worst_row = nullptr) const;
};

/// Numeric solution candidate with a-posteriori diagnostics.
struct Certificate {
  std::vector<double> values;  // flat, length total_vars()
  std::vector<double> block_min_eig;
  double max_residual = 0.0;
  std::string solver_status;

  Eigen::MatrixXd block_matrix(const SDPProblem& p, int block) const;
  /// Assignment for the originating pool (id -> value), via the problem map.
};

/// Deterministic flattening of an assembled problem. Lossless: every
/// equality and block is carried over; rows only get unit-scale
/// normalization. The returned id map converts pool variable ids to flat
/// indices (used to un-flatten certificates into the symbolic templates).
struct Canonical {
  SDPProblem problem;
  std::vector<int> pool_to_flat;  // -1 for unmapped ids

  /// Pool-indexed values from a flat certificate.
  std::vector<double> pool_values(const Certificate& cert) const;
};

Canonical canonicalize(const AssembledProblem& ap);

struct VerifyReport {
  bool pass = false;
  double tol_psd = 0.0, tol_eq = 0.0;
  std::vector<double> block_min_eig;
  double worst_residual = 0.0;
  int worst_row = -1;
  std::string worst_tag;
  int worst_block = -1;
  std::string summary() const;
};

/// Independent check of a certificate: symmetric eigensolver per block plus
/// a sparse residual pass over every equality row.
VerifyReport verify(const Certificate& cert, const SDPProblem& p,
                    double tol_psd = 1e-7, double tol_eq = 1e-7);

/// Sparse SDPA (.dat-s) export. The file encodes the conic dual
///   min c'x  s.t.  sum_i x_i F_i - F0 >= 0
/// with F_i = -A_i, c = -rhs and F0 = 0, so a solver's matrix variable Y is
/// exactly this problem's block vector; free scalars are exported as a
/// split pair on a trailing diagonal block. Byte-deterministic.
void export_sdpa(const SDPProblem& p, std::ostream& os);
void export_sdpa_file(const SDPProblem& p, const std::string& path);

/// Read a solution produced externally. Accepts either a plain whitespace
/// vector of all canonical unknowns, or an SDPA-style result file with a
/// "yMat" section laid out per the export's block structure.
Certificate import_solution(const SDPProblem& p, const std::string& path);

/// Write/read certificates (JSON) for the CLI round trip.
void save_certificate(const Certificate& cert, const SDPProblem& p,
                      const std::string& path);
Certificate load_certificate(const SDPProblem& p, const std::string& path);

}  // namespace pdestab
