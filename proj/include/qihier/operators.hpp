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
#include <complex>
#include <set>
#include <string>
#include <vector>

#include "qihier/layout.hpp"
#include "qihier/tolerances.hpp"

namespace qihier {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Dense Hermitian operator on a composite system. The matrix is validated
/// to be Hermitian within tol::hermiticity at construction.
class HermitianOperator {
 public:
  HermitianOperator(SystemLayout layout, ComplexMatrix m);

  const SystemLayout& layout() const { return layout_; }
  const ComplexMatrix& matrix() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  double trace() const { return mat_.trace().real(); }

 private:
  SystemLayout layout_;
  ComplexMatrix mat_;
};

/// Hermitian, positive semidefinite (within tol::psd), unit trace
/// (within tol::trace_one).
class DensityOperator {
 public:
  explicit DensityOperator(HermitianOperator op);
  DensityOperator(SystemLayout layout, ComplexMatrix m)
      : DensityOperator(HermitianOperator(std::move(layout), std::move(m))) {}

  const HermitianOperator& op() const { return op_; }
  const SystemLayout& layout() const { return op_.layout(); }
  const ComplexMatrix& matrix() const { return op_.matrix(); }
  int dim() const { return op_.dim(); }

 private:
  HermitianOperator op_;
};

/// Pure state |v><v| on the given layout; v is normalized first.
DensityOperator pure_state(const SystemLayout& layout, const ComplexVector& v);

/// Computational basis state |k><k|.
DensityOperator basis_projector(const SystemLayout& layout, int k);

HermitianOperator identity_operator(const SystemLayout& layout);

// --- tensor algebra ------------------------------------------------------

/// Kronecker product of the raw matrices (row-major index convention:
/// (i_a, i_b) -> i_a*dim(b) + i_b).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tensor product; the result's layout is a's factors followed by b's.
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

/// Trace out the named factors; remaining factors keep their order.
HermitianOperator partial_trace(const HermitianOperator& x, const std::set<std::string>& drop);

/// Transpose the named factors in the reference basis. Exact involution:
/// applying twice returns the input bitwise.
HermitianOperator partial_transpose(const HermitianOperator& x, const std::set<std::string>& on);

/// Zero every off-diagonal entry that couples different reference-basis
/// indices of the named factors. Idempotent, trace preserving.
HermitianOperator dephase(const HermitianOperator& x, const std::set<std::string>& on);

/// Place opA on the A-side factors and opB on the B-side factors of an
/// arbitrary (possibly interleaved) layout. opA/opB are indexed row-major
/// over that side's factors in layout order.
ComplexMatrix embed_bipartite(const SystemLayout& layout, const ComplexMatrix& op_a,
                              const ComplexMatrix& op_b);

// --- spectral routines ----------------------------------------------------

struct EigenSystem {
  RealVector eigenvalues;   // descending
  ComplexMatrix eigenvectors;  // columns, matching order
};

/// Eigendecomposition of a Hermitian operator, eigenvalues descending.
EigenSystem eig_hermitian(const HermitianOperator& x);
EigenSystem eig_hermitian(const ComplexMatrix& m);

// --- distances and entropies ----------------------------------------------

/// Squared fidelity F^2(rho, sigma) = ||sqrt(rho) sqrt(sigma)||_1^2 in [0,1].
double fidelity_squared(const DensityOperator& rho, const DensityOperator& sigma);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const HermitianOperator& x);
double trace_norm(const ComplexMatrix& m);

/// Von Neumann entropy in bits. Eigenvalues below tol::log_clamp contribute 0.
double von_neumann_entropy(const DensityOperator& rho);

/// Quantum relative entropy D(rho||sigma) in bits; +infinity when the support
/// of rho is not contained in the support of sigma.
double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma);

/// Binary entropy h(x) = -x log2 x - (1-x) log2 (1-x).
double binary_entropy(double x);

}  // namespace qihier
