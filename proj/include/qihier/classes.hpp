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

#include <tuple>

#include "qihier/channels.hpp"

namespace qihier {

/// Probe state rho_{a,b} on a d-dimensional system:
///   a = b : |a><a|
///   a < b : (|a>+|b>)(<a|+<b|)/2
///   a > b : (|a>+i|b>)(<a|-i<b|)/2
/// Together these span the full operator space of the system.
DensityOperator basis_state(int a, int b, int d);

/// All d^2 probe states rho_{a,b} plus the change-of-basis matrix from the
/// probe family to matrix units (columns are vec(rho_{a,b}) in (a,b)
/// lexicographic order).
struct ProbeBasis {
  int dim = 0;
  std::vector<std::tuple<int, int, DensityOperator>> states;
  ComplexMatrix change_of_basis;  // d^2 x d^2
  double condition_number = 0.0;
};

ProbeBasis make_probe_basis(int d);

/// True iff dephasing the selected B factors leaves rho unchanged within
/// trace-norm tol: rho is quantum on the rest, incoherent on those factors.
bool is_qi_state(const DensityOperator& rho, const std::set<std::string>& b_factors,
                 double tol = tol::qi_default);

/// True iff rho is diagonal on the selected factors within trace-norm tol.
bool is_incoherent_state(const DensityOperator& rho, const std::set<std::string>& factors,
                         double tol = tol::qi_default);

/// Maximally incoherent: every reference-basis state maps to an incoherent
/// state (sufficient by convexity). Witness: first failing basis index.
MembershipVerdict is_mio(const KrausChannel& ch, double tol = tol::qi_default);
MembershipVerdict is_mio(const ChoiOperator& ch, double tol = tol::qi_default);

/// PPT: the Choi operator stays psd under partial transpose of every A-side
/// factor (input and output). Witness: the minimum eigenvalue.
MembershipVerdict is_ppt(const KrausChannel& ch, double tol = tol::psd);
MembershipVerdict is_ppt(const ChoiOperator& ch, double tol = tol::psd);

/// QI-preserving, decided on the finite probe family
/// rho_{a,b} (x) |j><j|: the image of every probe must be a QI state.
/// Witness: first failing (a,b,j) in lexicographic order.
MembershipVerdict is_qip(const KrausChannel& ch, double tol = tol::qi_default);
MembershipVerdict is_qip(const ChoiOperator& ch, double tol = tol::qi_default);

/// Completely QI-preserving, decided on the maximally entangled probe
/// extended by an ancilla of A's dimension. Agrees with is_qip on every
/// channel; both are exposed so the equivalence stays testable.
MembershipVerdict is_cqip(const KrausChannel& ch, double tol = tol::qi_default);

}  // namespace qihier
