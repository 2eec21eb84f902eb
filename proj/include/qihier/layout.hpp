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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qihier {

/// Which party a tensor factor belongs to. The A/B split drives the
/// partial-transpose (PPT) and quantum-incoherent (QI) tests.
enum class Side { A, B };

inline char side_char(Side s) { return s == Side::A ? 'A' : 'B'; }

/// One tensor factor of a composite system.
struct Factor {
  std::string label;
  int dim = 0;
  Side side = Side::A;
};

/// Ordered list of tensor factors. Indices are row-major: the flat index of
/// the multi-index (i_0, ..., i_{k-1}) is (((i_0*d_1)+i_1)*d_2+...)+i_{k-1},
/// i.e. the leftmost factor varies slowest.
class SystemLayout {
 public:
  SystemLayout() = default;

  explicit SystemLayout(std::vector<Factor> factors) : factors_(std::move(factors)) {
    dim_ = 1;
    for (const auto& f : factors_) {
      if (f.dim < 1) throw std::invalid_argument("layout: factor dimension must be >= 1");
      for (const auto& g : factors_)
        if (&f != &g && f.label == g.label)
          throw std::invalid_argument("layout: duplicate factor label '" + f.label + "'");
      dim_ *= f.dim;
    }
  }

  const std::vector<Factor>& factors() const { return factors_; }
  int dim() const { return dim_; }
  std::size_t size() const { return factors_.size(); }
  const Factor& factor(std::size_t i) const { return factors_.at(i); }

  bool has_label(const std::string& label) const {
    for (const auto& f : factors_)
      if (f.label == label) return true;
    return false;
  }

  int index_of(const std::string& label) const {
    for (std::size_t i = 0; i < factors_.size(); ++i)
      if (factors_[i].label == label) return static_cast<int>(i);
    throw std::invalid_argument("layout: unknown factor label '" + label + "'");
  }

  /// Labels of all factors on the given side, in layout order.
  std::vector<std::string> labels_of_side(Side s) const {
    std::vector<std::string> out;
    for (const auto& f : factors_)
      if (f.side == s) out.push_back(f.label);
    return out;
  }

  /// Product of dimensions of the factors on the given side.
  int dim_of_side(Side s) const {
    int d = 1;
    for (const auto& f : factors_)
      if (f.side == s) d *= f.dim;
    return d;
  }

  std::vector<std::string> all_labels() const {
    std::vector<std::string> out;
    for (const auto& f : factors_) out.push_back(f.label);
    return out;
  }

  /// Layout consisting of this layout's factors followed by other's.
  SystemLayout concat(const SystemLayout& other) const {
    std::vector<Factor> fs = factors_;
    fs.insert(fs.end(), other.factors_.begin(), other.factors_.end());
    return SystemLayout(std::move(fs));
  }

  /// Decompose a flat index into per-factor indices.
  std::vector<int> decompose(int flat) const {
    std::vector<int> idx(factors_.size());
    for (std::size_t k = factors_.size(); k-- > 0;) {
      idx[k] = flat % factors_[k].dim;
      flat /= factors_[k].dim;
    }
    return idx;
  }

  int compose(const std::vector<int>& idx) const {
    int flat = 0;
    for (std::size_t k = 0; k < factors_.size(); ++k) flat = flat * factors_[k].dim + idx[k];
    return flat;
  }

  friend bool operator==(const SystemLayout& a, const SystemLayout& b) {
    if (a.factors_.size() != b.factors_.size()) return false;
    for (std::size_t i = 0; i < a.factors_.size(); ++i) {
      const auto& fa = a.factors_[i];
      const auto& fb = b.factors_[i];
      if (fa.label != fb.label || fa.dim != fb.dim || fa.side != fb.side) return false;
    }
    return true;
  }
  friend bool operator!=(const SystemLayout& a, const SystemLayout& b) { return !(a == b); }

  std::string to_string() const {
    std::string s;
    for (const auto& f : factors_) {
      if (!s.empty()) s += "*";
      s += f.label + "(" + std::to_string(f.dim) + "," + side_char(f.side) + ")";
    }
    return s.empty() ? "scalar" : s;
  }

 private:
  std::vector<Factor> factors_;
  int dim_ = 1;
};

/// Shorthand for the ubiquitous one- and two-factor layouts.
inline SystemLayout make_layout(std::initializer_list<Factor> fs) {
  return SystemLayout(std::vector<Factor>(fs));
}

}  // namespace qihier
