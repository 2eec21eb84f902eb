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

#include "qihier/classes.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace qihier {

namespace {

std::set<std::string> side_labels(const SystemLayout& lay, Side s) {
  auto v = lay.labels_of_side(s);
  return {v.begin(), v.end()};
}

ComplexMatrix probe_matrix(int a, int b, int d) {
  ComplexVector v = ComplexVector::Zero(d);
  if (a == b) {
    v(a) = 1.0;
  } else if (a < b) {
    v(a) = 1.0 / std::sqrt(2.0);
    v(b) = 1.0 / std::sqrt(2.0);
  } else {
    v(a) = 1.0 / std::sqrt(2.0);
    v(b) = Complex(0.0, 1.0) / std::sqrt(2.0);
  }
  return v * v.adjoint();
}

// Dephase the selected factors of a raw matrix without constructing states.
ComplexMatrix dephase_matrix(const SystemLayout& lay, const ComplexMatrix& m,
                             const std::set<std::string>& on) {
  if (on.empty()) return m;
  HermitianOperator h(lay, 0.5 * (m + m.adjoint().eval()));
  return dephase(h, on).matrix();
}

bool qi_within(const SystemLayout& lay, const ComplexMatrix& m,
               const std::set<std::string>& b_labels, double tol, double* deviation) {
  const ComplexMatrix d = dephase_matrix(lay, m, b_labels);
  const double dev = trace_norm(ComplexMatrix(d - 0.5 * (m + m.adjoint().eval())));
  if (deviation) *deviation = dev;
  return dev <= tol;
}

std::string index_description(const SystemLayout& lay, int flat) {
  std::vector<int> idx = lay.decompose(flat);
  std::string s = "(";
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(idx[k]);
  }
  return s + ")";
}

MembershipVerdict check_mio(const ChoiOperator& ch, double tol) {
  MembershipVerdict v;
  v.class_name = "MIO";
  v.tolerance = tol;
  const SystemLayout& in = ch.input_layout();
  const SystemLayout& out = ch.output_layout();
  std::set<std::string> all_out;
  for (const auto& f : out.factors()) all_out.insert(f.label);
  for (int z = 0; z < in.dim(); ++z) {
    ComplexMatrix probe = ComplexMatrix::Zero(in.dim(), in.dim());
    probe(z, z) = 1.0;
    ComplexMatrix img = apply_matrix(ch, probe);
    double dev = 0.0;
    if (!qi_within(out, img, all_out, tol, &dev)) {
      v.member = false;
      v.witness = Witness{"basis state " + index_description(in, z), dev};
      return v;
    }
  }
  v.member = true;
  return v;
}

MembershipVerdict check_qip(const ChoiOperator& ch, double tol) {
  MembershipVerdict v;
  v.class_name = "QIP";
  v.tolerance = tol;
  const SystemLayout& in = ch.input_layout();
  const SystemLayout& out = ch.output_layout();
  const int da = in.dim_of_side(Side::A);
  const int db = in.dim_of_side(Side::B);
  const std::set<std::string> out_b = side_labels(out, Side::B);

  for (int a = 0; a < da; ++a) {
    for (int b = 0; b < da; ++b) {
      const ComplexMatrix rho_ab = probe_matrix(a, b, da);
      for (int j = 0; j < db; ++j) {
        ComplexMatrix jm = ComplexMatrix::Zero(db, db);
        jm(j, j) = 1.0;
        const ComplexMatrix probe = embed_bipartite(in, rho_ab, jm);
        const ComplexMatrix img = apply_matrix(ch, probe);
        double dev = 0.0;
        if (!qi_within(out, img, out_b, tol, &dev)) {
          v.member = false;
          v.witness = Witness{"probe (a,b,j)=(" + std::to_string(a) + "," + std::to_string(b) +
                                  "," + std::to_string(j) + ")",
                              dev};
          return v;
        }
      }
    }
  }
  v.member = true;
  return v;
}

}  // namespace

DensityOperator basis_state(int a, int b, int d) {
  if (a < 0 || b < 0 || a >= d || b >= d)
    throw std::invalid_argument("basis_state: indices must lie in [0, d)");
  SystemLayout lay = make_layout({{"A", d, Side::A}});
  return DensityOperator(lay, probe_matrix(a, b, d));
}

ProbeBasis make_probe_basis(int d) {
  ProbeBasis basis;
  basis.dim = d;
  basis.change_of_basis = ComplexMatrix(d * d, d * d);
  int col = 0;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b, ++col) {
      DensityOperator rho = basis_state(a, b, d);
      // vec by stacking rows: entry (r,c) -> r*d + c.
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) basis.change_of_basis(r * d + c, col) = rho.matrix()(r, c);
      basis.states.emplace_back(a, b, std::move(rho));
    }
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(basis.change_of_basis);
  const double smin = svd.singularValues().minCoeff();
  basis.condition_number =
      smin > 0 ? svd.singularValues().maxCoeff() / smin : std::numeric_limits<double>::infinity();
  return basis;
}

bool is_qi_state(const DensityOperator& rho, const std::set<std::string>& b_factors,
                 double tol) {
  for (const auto& l : b_factors)
    if (!rho.layout().has_label(l))
      throw std::invalid_argument("is_qi_state: unknown factor label '" + l + "'");
  return qi_within(rho.layout(), rho.matrix(), b_factors, tol, nullptr);
}

bool is_incoherent_state(const DensityOperator& rho, const std::set<std::string>& factors,
                         double tol) {
  return is_qi_state(rho, factors, tol);
}

MembershipVerdict is_mio(const ChoiOperator& ch, double tol) { return check_mio(ch, tol); }
MembershipVerdict is_mio(const KrausChannel& ch, double tol) {
  return check_mio(choi_from_kraus(ch), tol);
}

MembershipVerdict is_ppt(const ChoiOperator& ch, double tol) {
  MembershipVerdict v;
  v.class_name = "PPT";
  v.tolerance = tol;
  const SystemLayout& choi_lay = ch.matrix().layout();
  const std::set<std::string> a_labels = side_labels(choi_lay, Side::A);
  if (a_labels.empty() || side_labels(choi_lay, Side::B).empty())
    throw std::invalid_argument("is_ppt: channel layout lacks an A/B split");
  HermitianOperator transposed = partial_transpose(ch.matrix(), a_labels);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(transposed.matrix(), Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  v.member = min_eig >= -tol;
  if (!v.member) v.witness = Witness{"min eigenvalue of Choi partial transpose on A", min_eig};
  return v;
}
MembershipVerdict is_ppt(const KrausChannel& ch, double tol) {
  return is_ppt(choi_from_kraus(ch), tol);
}

MembershipVerdict is_qip(const ChoiOperator& ch, double tol) { return check_qip(ch, tol); }
MembershipVerdict is_qip(const KrausChannel& ch, double tol) {
  return check_qip(choi_from_kraus(ch), tol);
}

MembershipVerdict is_cqip(const KrausChannel& ch, double tol) {
  MembershipVerdict v;
  v.class_name = "CQIP";
  v.tolerance = tol;
  const SystemLayout& in = ch.input_layout();
  const int da = in.dim_of_side(Side::A);
  const int db = in.dim_of_side(Side::B);

  // Extend with an ancilla of A's dimension and probe with the maximally
  // entangled state across ancilla and A, times |j><j| on B.
  SystemLayout anc = make_layout({{"__anc", da, Side::A}});
  KrausChannel extended = make_tensor(make_identity(anc), ch);
  const SystemLayout& ext_in = extended.input_layout();
  const SystemLayout& ext_out = extended.output_layout();
  const std::set<std::string> out_b = side_labels(ext_out, Side::B);

  // Maximally entangled state on (ancilla (x) A side of the input).
  const int daa = da * da;
  ComplexMatrix phi = ComplexMatrix::Zero(daa, daa);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) phi(i * da + i, j * da + j) = 1.0 / da;

  for (int j = 0; j < db; ++j) {
    ComplexMatrix jm = ComplexMatrix::Zero(db, db);
    jm(j, j) = 1.0;
    const ComplexMatrix probe = embed_bipartite(ext_in, phi, jm);
    const ComplexMatrix img = apply_matrix(extended, probe);
    double dev = 0.0;
    if (!qi_within(ext_out, img, out_b, tol, &dev)) {
      v.member = false;
      v.witness = Witness{"entangled probe, j=" + std::to_string(j), dev};
      return v;
    }
  }
  v.member = true;
  return v;
}

}  // namespace qihier
