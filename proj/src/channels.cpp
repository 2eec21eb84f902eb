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

#include "qihier/channels.hpp"

#include <cmath>

namespace qihier {

namespace {

double completeness_deviation(const std::vector<ComplexMatrix>& kraus, int in_dim) {
  ComplexMatrix acc = ComplexMatrix::Zero(in_dim, in_dim);
  for (const auto& k : kraus) acc += k.adjoint() * k;
  return (acc - ComplexMatrix::Identity(in_dim, in_dim)).cwiseAbs().maxCoeff();
}

SystemLayout choi_layout(const SystemLayout& in, const SystemLayout& out) {
  // Output factors first. Input labels that collide with output labels get
  // an "_in" suffix so the combined layout stays addressable.
  std::vector<Factor> fs = out.factors();
  for (Factor f : in.factors()) {
    if (out.has_label(f.label)) f.label += "_in";
    fs.push_back(f);
  }
  return SystemLayout(fs);
}

}  // namespace

KrausChannel::KrausChannel(SystemLayout input, SystemLayout output,
                           std::vector<ComplexMatrix> kraus)
    : in_(std::move(input)), out_(std::move(output)), kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw std::invalid_argument("kraus channel: empty Kraus list");
  for (const auto& k : kraus_)
    if (k.rows() != out_.dim() || k.cols() != in_.dim())
      throw std::invalid_argument("kraus channel: Kraus matrix must be out_dim x in_dim");
  const double dev = completeness_deviation(kraus_, in_.dim());
  if (dev > tol::trace_preserving)
    throw std::invalid_argument("kraus channel: sum K'K deviates from identity by " +
                                std::to_string(dev));
}

ChoiOperator::ChoiOperator(SystemLayout input, SystemLayout output, HermitianOperator matrix)
    : in_(std::move(input)), out_(std::move(output)), mat_(std::move(matrix)) {
  if (mat_.dim() != in_.dim() * out_.dim())
    throw std::invalid_argument("choi operator: dimension != dim(out)*dim(in)");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(mat_.matrix(), Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tol::psd)
    throw std::invalid_argument("choi operator: not completely positive, min eigenvalue " +
                                std::to_string(min_eig));
  // tr_out J = I on the input.
  std::set<std::string> out_labels;
  for (std::size_t k = 0; k < out_.size(); ++k)
    out_labels.insert(mat_.layout().factor(k).label);
  HermitianOperator reduced = partial_trace(mat_, out_labels);
  const double dev = (reduced.matrix() - ComplexMatrix::Identity(in_.dim(), in_.dim()))
                         .cwiseAbs()
                         .maxCoeff();
  if (dev > tol::trace_preserving)
    throw std::invalid_argument("choi operator: tr_out J deviates from identity by " +
                                std::to_string(dev));
}

Instrument::Instrument(SystemLayout input, SystemLayout output,
                       std::vector<std::vector<ComplexMatrix>> branches)
    : in_(std::move(input)), out_(std::move(output)), branches_(std::move(branches)) {
  if (branches_.empty()) throw std::invalid_argument("instrument: no branches");
  ComplexMatrix acc = ComplexMatrix::Zero(in_.dim(), in_.dim());
  for (const auto& branch : branches_) {
    if (branch.empty()) throw std::invalid_argument("instrument: empty branch");
    ComplexMatrix part = ComplexMatrix::Zero(in_.dim(), in_.dim());
    for (const auto& k : branch) {
      if (k.rows() != out_.dim() || k.cols() != in_.dim())
        throw std::invalid_argument("instrument: Kraus matrix must be out_dim x in_dim");
      part += k.adjoint() * k;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(part, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().maxCoeff() > 1.0 + tol::trace_preserving)
      throw std::invalid_argument("instrument: branch is trace-increasing");
    acc += part;
  }
  const double dev = (acc - ComplexMatrix::Identity(in_.dim(), in_.dim())).cwiseAbs().maxCoeff();
  if (dev > tol::trace_preserving)
    throw std::invalid_argument("instrument: branches do not sum to a trace-preserving map, "
                                "deviation " + std::to_string(dev));
}

ChoiOperator choi_from_kraus(const KrausChannel& ch) {
  const int din = ch.input_layout().dim();
  const int dout = ch.output_layout().dim();
  ComplexMatrix j = ComplexMatrix::Zero(dout * din, dout * din);
  // J = sum_k |v_k><v_k| with v_k[(o,i)] = K_k[o,i].
  for (const auto& k : ch.kraus()) {
    ComplexVector v(dout * din);
    for (int o = 0; o < dout; ++o)
      for (int i = 0; i < din; ++i) v(o * din + i) = k(o, i);
    j.noalias() += v * v.adjoint();
  }
  SystemLayout lay = choi_layout(ch.input_layout(), ch.output_layout());
  return ChoiOperator(ch.input_layout(), ch.output_layout(),
                      HermitianOperator(std::move(lay), std::move(j)));
}

KrausChannel kraus_from_choi(const ChoiOperator& j) {
  EigenSystem es = eig_hermitian(j.matrix());
  const double min_eig = es.eigenvalues.minCoeff();
  if (min_eig < -tol::psd)
    throw std::invalid_argument("kraus_from_choi: Choi not psd, min eigenvalue " +
                                std::to_string(min_eig));
  const int din = j.input_layout().dim();
  const int dout = j.output_layout().dim();
  std::vector<ComplexMatrix> kraus;
  for (Eigen::Index r = 0; r < es.eigenvalues.size(); ++r) {
    if (es.eigenvalues(r) <= tol::choi_rank_cut) continue;
    const double s = std::sqrt(es.eigenvalues(r));
    ComplexMatrix k(dout, din);
    for (int o = 0; o < dout; ++o)
      for (int i = 0; i < din; ++i) k(o, i) = s * es.eigenvectors(o * din + i, r);
    kraus.push_back(std::move(k));
  }
  return KrausChannel(j.input_layout(), j.output_layout(), std::move(kraus));
}

ComplexMatrix apply_matrix(const KrausChannel& ch, const ComplexMatrix& rho) {
  if (rho.rows() != ch.input_layout().dim() || rho.cols() != ch.input_layout().dim())
    throw std::invalid_argument("apply: state dimension != channel input dimension");
  const int dout = ch.output_layout().dim();
  ComplexMatrix out = ComplexMatrix::Zero(dout, dout);
  for (const auto& k : ch.kraus()) out.noalias() += k * rho * k.adjoint();
  return out;
}

ComplexMatrix apply_matrix(const ChoiOperator& j, const ComplexMatrix& rho) {
  const int din = j.input_layout().dim();
  const int dout = j.output_layout().dim();
  if (rho.rows() != din || rho.cols() != din)
    throw std::invalid_argument("apply: state dimension != channel input dimension");
  // E(rho)[r,c] = sum_pq rho[p,q] J[(r,p),(c,q)]
  ComplexMatrix out = ComplexMatrix::Zero(dout, dout);
  const ComplexMatrix& jm = j.matrix().matrix();
  for (int r = 0; r < dout; ++r)
    for (int c = 0; c < dout; ++c) {
      Complex acc = 0.0;
      for (int p = 0; p < din; ++p)
        for (int q = 0; q < din; ++q) acc += rho(p, q) * jm(r * din + p, c * din + q);
      out(r, c) = acc;
    }
  return out;
}

DensityOperator apply(const KrausChannel& ch, const DensityOperator& rho) {
  if (rho.layout() != ch.input_layout())
    throw std::invalid_argument("apply: state layout != channel input layout");
  return DensityOperator(ch.output_layout(), apply_matrix(ch, rho.matrix()));
}

DensityOperator apply(const ChoiOperator& j, const DensityOperator& rho) {
  if (rho.layout() != j.input_layout())
    throw std::invalid_argument("apply: state layout != channel input layout");
  return DensityOperator(j.output_layout(), apply_matrix(j, rho.matrix()));
}

ChoiOperator compose(const ChoiOperator& f, const ChoiOperator& g) {
  if (g.output_layout() != f.input_layout())
    throw std::invalid_argument("compose: inner layouts do not match");
  KrausChannel kf = kraus_from_choi(f);
  KrausChannel kg = kraus_from_choi(g);
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(kf.kraus().size() * kg.kraus().size());
  for (const auto& a : kf.kraus())
    for (const auto& b : kg.kraus()) kraus.push_back(a * b);
  return choi_from_kraus(KrausChannel(g.input_layout(), f.output_layout(), std::move(kraus)));
}

bool channels_equal(const ChoiOperator& a, const ChoiOperator& b) {
  if (a.input_layout() != b.input_layout() || a.output_layout() != b.output_layout())
    throw std::invalid_argument("channels_equal: layout mismatch");
  return (a.matrix().matrix() - b.matrix().matrix()).cwiseAbs().maxCoeff() <= tol::channel_equal;
}

bool channels_equal(const KrausChannel& a, const KrausChannel& b) {
  return channels_equal(choi_from_kraus(a), choi_from_kraus(b));
}

KrausChannel make_identity(const SystemLayout& layout) {
  return KrausChannel(layout, layout,
                      {ComplexMatrix::Identity(layout.dim(), layout.dim())});
}

KrausChannel make_unitary(const SystemLayout& input, const SystemLayout& output,
                          const ComplexMatrix& u) {
  return KrausChannel(input, output, {u});
}

KrausChannel make_dephasing(const SystemLayout& layout, const std::set<std::string>& on) {
  std::set<std::string> sel = on;
  if (sel.empty())
    for (const auto& f : layout.factors()) sel.insert(f.label);
  for (const auto& l : sel)
    if (!layout.has_label(l))
      throw std::invalid_argument("dephasing channel: unknown factor label '" + l + "'");

  // One projector Kraus per index pattern of the selected factors.
  std::vector<bool> selected(layout.size(), false);
  int npatterns = 1;
  for (std::size_t k = 0; k < layout.size(); ++k) {
    if (sel.count(layout.factor(k).label)) {
      selected[k] = true;
      npatterns *= layout.factor(k).dim;
    }
  }

  const int d = layout.dim();
  std::vector<ComplexMatrix> kraus(npatterns, ComplexMatrix::Zero(d, d));
  for (int z = 0; z < d; ++z) {
    std::vector<int> zi = layout.decompose(z);
    int pattern = 0;
    for (std::size_t k = 0; k < layout.size(); ++k)
      if (selected[k]) pattern = pattern * layout.factor(k).dim + zi[k];
    kraus[pattern](z, z) = 1.0;
  }
  return KrausChannel(layout, layout, std::move(kraus));
}

KrausChannel make_swap(int d) {
  if (d < 2) throw std::invalid_argument("swap: dimension must be >= 2");
  SystemLayout lay = make_layout({{"A", d, Side::A}, {"B", d, Side::B}});
  ComplexMatrix s = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s(j * d + i, i * d + j) = 1.0;
  return KrausChannel(lay, lay, {std::move(s)});
}

KrausChannel make_tensor(const KrausChannel& a, const KrausChannel& b) {
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(a.kraus().size() * b.kraus().size());
  for (const auto& ka : a.kraus())
    for (const auto& kb : b.kraus()) kraus.push_back(kron(ka, kb));
  return KrausChannel(a.input_layout().concat(b.input_layout()),
                      a.output_layout().concat(b.output_layout()), std::move(kraus));
}

KrausChannel make_state_replacement(const SystemLayout& input, const SystemLayout& output,
                                    const ComplexVector& phi) {
  if (phi.size() != output.dim())
    throw std::invalid_argument("state replacement: vector dimension != output dimension");
  ComplexVector u = phi / phi.norm();
  std::vector<ComplexMatrix> kraus;
  for (int k = 0; k < input.dim(); ++k) {
    ComplexMatrix m = ComplexMatrix::Zero(output.dim(), input.dim());
    m.col(k) = u;
    kraus.push_back(std::move(m));
  }
  return KrausChannel(input, output, std::move(kraus));
}

KrausChannel make_basis_copy(int d) {
  if (d < 2) throw std::invalid_argument("basis copy: dimension must be >= 2");
  SystemLayout lay = make_layout({{"A", d, Side::A}, {"B", d, Side::B}});
  // K_k = sum_a |a><a| (x) |a><k|, one Kraus per source index k of B.
  std::vector<ComplexMatrix> kraus;
  for (int k = 0; k < d; ++k) {
    ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
    for (int a = 0; a < d; ++a) m(a * d + a, a * d + k) = 1.0;
    kraus.push_back(std::move(m));
  }
  return KrausChannel(lay, lay, std::move(kraus));
}

KrausChannel make_one_way_lqicc(const Instrument& instrument,
                                const std::vector<KrausChannel>& conditional) {
  if (conditional.size() != instrument.branches().size())
    throw std::invalid_argument("one-way lqicc: need one conditional channel per branch");
  for (std::size_t i = 0; i < conditional.size(); ++i) {
    MembershipVerdict v = is_io_kraus(conditional[i]);
    if (!v.member)
      throw std::invalid_argument("one-way lqicc: conditional channel " + std::to_string(i) +
                                  " is not in incoherent Kraus form (" + v.witness->probe + ")");
    if (i > 0 && (conditional[i].input_layout() != conditional[0].input_layout() ||
                  conditional[i].output_layout() != conditional[0].output_layout()))
      throw std::invalid_argument("one-way lqicc: conditional channels must share layouts");
  }
  std::vector<ComplexMatrix> kraus;
  for (std::size_t i = 0; i < instrument.branches().size(); ++i)
    for (const auto& e : instrument.branches()[i])
      for (const auto& f : conditional[i].kraus()) kraus.push_back(kron(e, f));
  return KrausChannel(
      instrument.input_layout().concat(conditional[0].input_layout()),
      instrument.output_layout().concat(conditional[0].output_layout()), std::move(kraus));
}

KrausChannel make_sep_from_product_kraus(
    const SystemLayout& a_layout, const SystemLayout& b_layout,
    const std::vector<std::pair<ComplexMatrix, ComplexMatrix>>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("sep channel: empty Kraus pair list");
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(pairs.size());
  for (const auto& [m, k] : pairs) kraus.push_back(kron(m, k));
  const int din = a_layout.dim() * b_layout.dim();
  const double dev = completeness_deviation(kraus, din);
  if (dev > tol::trace_preserving)
    throw std::invalid_argument("sep channel: product Kraus pairs violate completeness by " +
                                std::to_string(dev));
  SystemLayout lay = a_layout.concat(b_layout);
  return KrausChannel(lay, lay, std::move(kraus));
}

MembershipVerdict is_io_kraus(const KrausChannel& ch) {
  MembershipVerdict v;
  v.class_name = "IO";
  v.tolerance = 1e-10;
  for (std::size_t k = 0; k < ch.kraus().size(); ++k) {
    const ComplexMatrix& m = ch.kraus()[k];
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
      int nonzeros = 0;
      for (Eigen::Index row = 0; row < m.rows(); ++row)
        if (std::abs(m(row, col)) > v.tolerance) ++nonzeros;
      if (nonzeros > 1) {
        v.member = false;
        v.witness = Witness{"kraus " + std::to_string(k) + ", column " + std::to_string(col),
                            static_cast<double>(nonzeros)};
        return v;
      }
    }
  }
  v.member = true;
  return v;
}

}  // namespace qihier
