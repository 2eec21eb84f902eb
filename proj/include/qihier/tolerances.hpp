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

namespace qihier::tol {

// Numerical tolerances, sized for dense double-precision arithmetic on
// systems of a few hundred dimensions.
inline constexpr double hermiticity = 1e-10;   // max |M[i][j] - conj(M[j][i])|
inline constexpr double psd = 1e-8;            // min eigenvalue >= -psd
inline constexpr double trace_one = 1e-10;     // |tr(rho) - 1|
inline constexpr double spectral = 1e-8;       // relative eigendecomposition residual
inline constexpr double trace_preserving = 1e-8;  // max |sum K'K - I|
inline constexpr double channel_equal = 1e-8;  // entrywise Choi comparison
inline constexpr double choi_rank_cut = 1e-9;  // eigenvalues above this count as rank
inline constexpr double qi_default = 1e-7;     // trace-norm slack for QI/incoherence tests
inline constexpr double support_cut = 1e-12;   // eigenvalues above this span the support
inline constexpr double log_clamp = 1e-12;     // eigenvalues in [-log_clamp, 0] clamp to 0

}  // namespace qihier::tol
