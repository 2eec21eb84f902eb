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

#include <string>
#include <vector>

#include "qihier/operators.hpp"
#include "qihier/verdict.hpp"

namespace qihier {

/// Completely positive trace-preserving map in Kraus form. Every Kraus
/// matrix maps the input space to the output space; sum K'K = I is
/// validated within tol::trace_preserving.
class KrausChannel {
 public:
  KrausChannel(SystemLayout input, SystemLayout output, std::vector<ComplexMatrix> kraus);

  const SystemLayout& input_layout() const { return in_; }
  const SystemLayout& output_layout() const { return out_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }

 private:
  SystemLayout in_, out_;
  std::vector<ComplexMatrix> kraus_;
};

/// Choi operator of a channel, living on output (x) input (output factors
/// first): J = sum_ij E(|i><j|) (x) |i><j|, unnormalized, tr J = dim(in).
/// Complete positivity (J psd) and trace preservation (tr_out J = I) are
/// validated at construction.
class ChoiOperator {
 public:
  ChoiOperator(SystemLayout input, SystemLayout output, HermitianOperator matrix);

  const SystemLayout& input_layout() const { return in_; }
  const SystemLayout& output_layout() const { return out_; }
  const HermitianOperator& matrix() const { return mat_; }

 private:
  SystemLayout in_, out_;
  HermitianOperator mat_;
};

/// Quantum instrument: a finite list of completely positive trace-non-
/// increasing branches (each a Kraus list) summing to a trace-preserving map.
class Instrument {
 public:
  Instrument(SystemLayout input, SystemLayout output,
             std::vector<std::vector<ComplexMatrix>> branches);

  const SystemLayout& input_layout() const { return in_; }
  const SystemLayout& output_layout() const { return out_; }
  const std::vector<std::vector<ComplexMatrix>>& branches() const { return branches_; }

 private:
  SystemLayout in_, out_;
  std::vector<std::vector<ComplexMatrix>> branches_;
};

// --- conversions and application -------------------------------------------

ChoiOperator choi_from_kraus(const KrausChannel& ch);

/// Eigendecompose the Choi matrix; eigenvalues above tol::choi_rank_cut each
/// yield one Kraus operator.
KrausChannel kraus_from_choi(const ChoiOperator& j);

DensityOperator apply(const KrausChannel& ch, const DensityOperator& rho);
DensityOperator apply(const ChoiOperator& j, const DensityOperator& rho);

/// Raw application without density-operator validation (useful for probes
/// that are not states, and inside optimization loops).
ComplexMatrix apply_matrix(const KrausChannel& ch, const ComplexMatrix& rho);
ComplexMatrix apply_matrix(const ChoiOperator& j, const ComplexMatrix& rho);

/// Choi operator of f after g (first g, then f).
ChoiOperator compose(const ChoiOperator& f, const ChoiOperator& g);

/// Entrywise Choi comparison within tol::channel_equal.
bool channels_equal(const ChoiOperator& a, const ChoiOperator& b);
bool channels_equal(const KrausChannel& a, const KrausChannel& b);

// --- constructors -----------------------------------------------------------

/// Identity channel on the layout.
KrausChannel make_identity(const SystemLayout& layout);

/// Unitary channel.
KrausChannel make_unitary(const SystemLayout& input, const SystemLayout& output,
                          const ComplexMatrix& u);

/// Completely dephasing channel on the selected factors (all factors when
/// the set is empty). Kraus operators are basis projectors, so this is an
/// incoherent operation.
KrausChannel make_dephasing(const SystemLayout& layout, const std::set<std::string>& on = {});

/// Swap of two d-dimensional factors, A-side first. The canonical example of
/// a coherence-free channel that is not PPT.
KrausChannel make_swap(int d);

/// Tensor product of two channels; layouts concatenate.
KrausChannel make_tensor(const KrausChannel& a, const KrausChannel& b);

/// Replace the full input with a fixed pure state of the output layout:
/// rho -> |phi><phi| tr(rho).
KrausChannel make_state_replacement(const SystemLayout& input, const SystemLayout& output,
                                    const ComplexVector& phi);

/// Channel that overwrites the second factor with the first factor's
/// reference-basis value: |a>|b> -> |a>|a>. Its Kraus operators are
/// incoherent, yet the channel can create entanglement from |+>|0>.
KrausChannel make_basis_copy(int d);

/// One round of classical communication: A's instrument, then on B the
/// incoherent channel selected by A's outcome. Kraus operators are the
/// products (A branch) (x) (B conditional).
KrausChannel make_one_way_lqicc(const Instrument& instrument,
                                const std::vector<KrausChannel>& conditional);

/// Separable channel from explicit product Kraus pairs (M on A, K on B).
/// Throws if the pairs do not satisfy the completeness relation, reporting
/// the deviation norm.
KrausChannel make_sep_from_product_kraus(
    const SystemLayout& a_layout, const SystemLayout& b_layout,
    const std::vector<std::pair<ComplexMatrix, ComplexMatrix>>& pairs);

// --- structural predicates ---------------------------------------------------

/// Whether the GIVEN Kraus decomposition is incoherent: every Kraus matrix
/// has at most one nonzero entry per column. A negative verdict speaks only
/// about this decomposition; the same channel may admit another one.
MembershipVerdict is_io_kraus(const KrausChannel& ch);

}  // namespace qihier
