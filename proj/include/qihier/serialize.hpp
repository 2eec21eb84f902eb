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

#include <json.hpp>
#include <variant>

#include "qihier/channels.hpp"
#include "qihier/distill.hpp"

namespace qihier {

// JSON file formats. Complex numbers are always [re, im] pairs; matrices are
// flat row-major arrays of those pairs; every factor carries its A/B side tag
// because the PPT and QI tests need the bipartition.

using Json = nlohmann::json;

Json layout_to_json(const SystemLayout& layout);
SystemLayout layout_from_json(const Json& j);

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, int rows, int cols);

/// Channel file: {"kind": "kraus"|"choi", "dims_in": [...], "dims_out": [...],
/// "data": [matrix, ...]}.
Json channel_to_json(const KrausChannel& ch);
Json channel_to_json(const ChoiOperator& ch);
std::variant<KrausChannel, ChoiOperator> channel_from_json(const Json& j);

/// State file: {"dims": [...], "data": [matrix]}.
Json state_to_json(const DensityOperator& rho);
DensityOperator state_from_json(const Json& j);

Json verdict_to_json(const MembershipVerdict& v);
Json certificate_to_json(const sdp::CertificateReport& rep);
Json distillation_result_to_json(const DistillationResult& r);
Json hierarchy_report_to_json(const HierarchyReport& rep);

}  // namespace qihier
