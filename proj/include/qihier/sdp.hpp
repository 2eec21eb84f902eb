// Copyright 2026 The qihier developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "qihier/operators.hpp"

namespace qihier::sdp {

// Dense semidefinite programming over real symmetric psd blocks:
//
//   maximize  <C, X>   subject to   <A_i, X> = b_i,   X = diag(X_1,...,X_K) psd.
//
// Linear functionals are entered as sparse term lists; Hermitian matrix
// variables ride on top through the real embedding below.

struct BlockSpec {
  std::string name;
  int dim = 0;
};

/// One coefficient of a linear functional: value * X[row][col] on a block.
/// X is symmetric, so (row, col) and (col, row) address the same unknown;
/// terms on both orders accumulate.
struct Term {
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct LinearFunctional {
  std::vector<Term> terms;
};

struct Constraint {
  LinearFunctional lhs;
  double rhs = 0.0;
  std::string tag;  // diagnostic only
};

struct SdpProblem {
  std::vector<BlockSpec> blocks;
  LinearFunctional objective;  // maximized
  std::vector<Constraint> constraints;

  int add_block(const std::string& name, int dim);
  int total_block_dim() const;
};

enum class SolveStatus { optimal, infeasible, max_iterations, numerical_failure };

std::string to_string(SolveStatus s);

struct SolveOptions {
  double gap_tol = 1e-7;
  double feas_tol = 1e-8;
  int max_iters = 200;
  bool verbose = false;
};

struct SdpSolution {
  SolveStatus status = SolveStatus::numerical_failure;
  std::vector<Eigen::MatrixXd> blocks;      // primal X per block
  std::vector<double> dual;                 // y, one per constraint (0 on presolved-out rows)
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;                         // dual - primal
  int iterations = 0;
  std::vector<double> infeasibility_ray;    // Farkas certificate when infeasible
  std::string message;
};

/// Interior-point solve (Nesterov-Todd scaling, Mehrotra predictor-corrector)
/// with rank-revealing presolve. Deterministic for identical inputs.
SdpSolution solve(const SdpProblem& p, const SolveOptions& opts = {});

/// Certificate check recomputed from problem data and the solution fields
/// only, independent of solver internals.
struct CertificateCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct CertificateReport {
  std::vector<CertificateCheck> checks;
  bool pass = false;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double min_dual_slack_eig = 0.0;  // lambda_min of A*(y) - C
  double primal_trace = 0.0;        // sum of block traces, for rigorous bounds
};

struct VerifyOptions {
  double eq_tol = 1e-6;   // primal equality residual
  double psd_tol = 1e-8;  // minimum eigenvalue slack
  double gap_tol = 1e-6;
};

CertificateReport verify_certificate(const SdpProblem& p, const SdpSolution& s,
                                     const VerifyOptions& opts = {});

// --- Hermitian variables via real embedding ---------------------------------
//
// A Hermitian d x d matrix X maps to the real symmetric 2d x 2d block
//   T(X) = [[Re X, -Im X], [Im X, Re X]],
// which is psd exactly when X is. The pattern itself is enforced by the
// structural equality constraints emitted alongside the block.

class HermitianEmbedding {
 public:
  explicit HermitianEmbedding(int d) : d_(d) {}

  int dim() const { return d_; }
  int block_dim() const { return 2 * d_; }

  Eigen::MatrixXd embed(const ComplexMatrix& x) const;
  ComplexMatrix extract(const Eigen::MatrixXd& s) const;

  /// Terms evaluating scale * Re X[p][q] (resp. Im) on the embedded block.
  void append_real_part(std::vector<Term>& out, int block, int p, int q, double scale) const;
  void append_imag_part(std::vector<Term>& out, int block, int p, int q, double scale) const;

  /// Equalities pinning a symmetric block to the embedded pattern.
  std::vector<Constraint> structural_constraints(int block, const std::string& tag) const;

 private:
  int d_;
};

inline HermitianEmbedding embed_hermitian(int d) { return HermitianEmbedding(d); }

// --- operator-valued modeling layer ------------------------------------------
//
// Linear expressions in Hermitian operator variables, compiled to real
// constraints on embedded blocks. Expressions track, per entry, a complex-
// linear combination of variable entries plus a constant.

class OperatorModel;

struct OperatorVar {
  int id = -1;
};

class OperatorExpr {
 public:
  const SystemLayout& layout() const { return layout_; }

  OperatorExpr operator-(const OperatorExpr& rhs) const;
  OperatorExpr operator+(const OperatorExpr& rhs) const;

 private:
  friend class OperatorModel;
  struct EntryTerm {
    int var = 0;
    int p = 0;
    int q = 0;
    Complex weight;
  };
  SystemLayout layout_;
  // terms_[r * dim + c] lists the variable entries feeding expression entry (r,c)
  std::vector<std::vector<EntryTerm>> terms_;
  ComplexMatrix constant_;
};

class OperatorModel {
 public:
  explicit OperatorModel(SdpProblem& problem) : problem_(&problem) {}

  /// New Hermitian psd operator variable: adds an embedded block plus its
  /// structural constraints.
  OperatorVar add_hermitian_var(const std::string& name, const SystemLayout& layout);

  OperatorExpr var(OperatorVar v) const;
  OperatorExpr constant(const SystemLayout& layout, const ComplexMatrix& value) const;

  OperatorExpr partial_transpose(const OperatorExpr& e, const std::set<std::string>& on) const;
  OperatorExpr partial_trace(const OperatorExpr& e, const std::set<std::string>& drop) const;

  /// Weighted partial trace with weight W on the dropped factors:
  /// out[r,c] = sum_{p,q} W[p,q] * e[(r,p),(c,q)]. With W = rho this is the
  /// channel application E(rho) of a Choi-operator variable.
  OperatorExpr weighted_partial_trace(const OperatorExpr& e, const ComplexMatrix& weight,
                                      const std::set<std::string>& drop) const;

  /// expr == target, entrywise (real and imaginary parts separately).
  void equality_of_operators(const OperatorExpr& e, const ComplexMatrix& target,
                             const std::string& tag);

  /// Off-diagonal entries coupling different indices of the selected factors
  /// vanish.
  void diagonal_only(const OperatorExpr& e, const std::set<std::string>& factors,
                     const std::string& tag);

  /// partial_trace(expr, drop) == target.
  void partial_trace_equals(const OperatorExpr& e, const std::set<std::string>& drop,
                            const ComplexMatrix& target, const std::string& tag);

  /// New psd block Y together with equalities Y == expr.
  OperatorVar psd_linked_block(const OperatorExpr& e, const std::string& name);

  /// Objective max tr(H X(expr)); H must be Hermitian so the value is real.
  void maximize_real_inner_product(const ComplexMatrix& h, const OperatorExpr& e);

  /// Add tr(H expr) to the objective (used to assemble multi-part objectives).
  void add_objective_inner_product(const ComplexMatrix& h, const OperatorExpr& e);

  /// Decode a variable's Hermitian value from a solution.
  ComplexMatrix value(OperatorVar v, const SdpSolution& s) const;

  const SystemLayout& layout_of(OperatorVar v) const;

 private:
  struct VarInfo {
    SystemLayout layout;
    int block = 0;
    HermitianEmbedding emb{1};
  };
  void append_entry_terms(std::vector<Term>& out, const OperatorExpr& e, int r, int c,
                          bool imag_part, double scale) const;

  SdpProblem* problem_;
  std::vector<VarInfo> vars_;
};

// --- plain-text problem files -------------------------------------------------

/// Sparse-triplet dump (block, row, col, value per term) for external
/// cross-checking; parse_problem reads the same format back.
void dump_problem(const SdpProblem& p, std::ostream& os);
SdpProblem parse_problem(std::istream& is);

}  // namespace qihier::sdp
