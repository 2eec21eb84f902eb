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

#include <optional>
#include <string>

namespace qihier {

/// Evidence for a failed membership test: which probe broke and by how much.
struct Witness {
  std::string probe;
  double value = 0.0;
};

/// Outcome of a channel-class or state-set membership test. Non-member
/// verdicts always carry a witness.
struct MembershipVerdict {
  std::string class_name;
  bool member = false;
  std::optional<Witness> witness;
  double tolerance = 0.0;
};

}  // namespace qihier
