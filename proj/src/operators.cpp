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

#include "qihier/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qihier {

namespace {

void check_labels_exist(const SystemLayout& layout, const std::set<std::string>& labels) {
  for (const auto& l : labels)
    if (!layout.has_label(l))
      throw std::invalid_argument("unknown factor label '" + l + "' in layout " + layout.to_string());
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

HermitianOperator::HermitianOperator(SystemLayout layout, ComplexMatrix m)
    : layout_(std::move(layout)), mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols())
    throw std::invalid_argument("hermitian operator: matrix must be square");
  if (mat_.rows() != layout_.dim())
    throw std::invalid_argument("hermitian operator: matrix dimension " +
                                std::to_string(mat_.rows()) + " != layout dimension " +
                                std::to_string(layout_.dim()));
  const double dev = max_abs(mat_ - mat_.adjoint());
  if (dev > tol::hermiticity)
    throw std::invalid_argument("hermitian operator: hermiticity violated by " +
                                std::to_string(dev));
}

DensityOperator::DensityOperator(HermitianOperator op) : op_(std::move(op)) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(op_.matrix(), Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tol::psd)
    throw std::invalid_argument("density operator: negative eigenvalue " + std::to_string(min_eig));
  const double tr = op_.trace();
  if (std::abs(tr - 1.0) > tol::trace_one)
    throw std::invalid_argument("density operator: trace " + std::to_string(tr) + " != 1");
}

DensityOperator pure_state(const SystemLayout& layout, const ComplexVector& v) {
  if (v.size() != layout.dim())
    throw std::invalid_argument("pure state: vector dimension != layout dimension");
  const double n = v.norm();
  if (n < 1e-14) throw std::invalid_argument("pure state: zero vector");
  ComplexVector u = v / n;
  return DensityOperator(layout, u * u.adjoint());
}

DensityOperator basis_projector(const SystemLayout& layout, int k) {
  if (k < 0 || k >= layout.dim()) throw std::invalid_argument("basis projector: index out of range");
  ComplexVector v = ComplexVector::Zero(layout.dim());
  v(k) = 1.0;
  return pure_state(layout, v);
}

HermitianOperator identity_operator(const SystemLayout& layout) {
  return HermitianOperator(layout, ComplexMatrix::Identity(layout.dim(), layout.dim()));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(a.layout().concat(b.layout()), kron(a.matrix(), b.matrix()));
}

HermitianOperator partial_trace(const HermitianOperator& x, const std::set<std::string>& drop) {
  const SystemLayout& lay = x.layout();
  check_labels_exist(lay, drop);

  std::vector<Factor> kept;
  std::vector<bool> dropped(lay.size(), false);
  for (std::size_t k = 0; k < lay.size(); ++k) {
    if (drop.count(lay.factor(k).label))
      dropped[k] = true;
    else
      kept.push_back(lay.factor(k));
  }
  SystemLayout out_lay(kept);

  const int dout = out_lay.dim();
  ComplexMatrix out = ComplexMatrix::Zero(dout, dout);
  const int din = lay.dim();
  // Row-major scan; kept and dropped sub-indices are extracted per entry.
  std::vector<int> ri, ci;
  for (int r = 0; r < din; ++r) {
    ri = lay.decompose(r);
    for (int c = 0; c < din; ++c) {
      ci = lay.decompose(c);
      bool diag_on_dropped = true;
      int ro = 0, co = 0;
      for (std::size_t k = 0; k < lay.size(); ++k) {
        if (dropped[k]) {
          if (ri[k] != ci[k]) {
            diag_on_dropped = false;
            break;
          }
        } else {
          ro = ro * lay.factor(k).dim + ri[k];
          co = co * lay.factor(k).dim + ci[k];
        }
      }
      if (diag_on_dropped) out(ro, co) += x.matrix()(r, c);
    }
  }
  return HermitianOperator(std::move(out_lay), std::move(out));
}

HermitianOperator partial_transpose(const HermitianOperator& x, const std::set<std::string>& on) {
  const SystemLayout& lay = x.layout();
  check_labels_exist(lay, on);

  std::vector<bool> flip(lay.size(), false);
  for (std::size_t k = 0; k < lay.size(); ++k) flip[k] = on.count(lay.factor(k).label) > 0;

  const int d = lay.dim();
  ComplexMatrix out(d, d);
  for (int r = 0; r < d; ++r) {
    std::vector<int> ri = lay.decompose(r);
    for (int c = 0; c < d; ++c) {
      std::vector<int> ci = lay.decompose(c);
      std::vector<int> rs = ri, cs = ci;
      for (std::size_t k = 0; k < lay.size(); ++k)
        if (flip[k]) std::swap(rs[k], cs[k]);
      out(lay.compose(rs), lay.compose(cs)) = x.matrix()(r, c);
    }
  }
  return HermitianOperator(lay, std::move(out));
}

HermitianOperator dephase(const HermitianOperator& x, const std::set<std::string>& on) {
  const SystemLayout& lay = x.layout();
  check_labels_exist(lay, on);

  std::vector<bool> sel(lay.size(), false);
  for (std::size_t k = 0; k < lay.size(); ++k) sel[k] = on.count(lay.factor(k).label) > 0;

  const int d = lay.dim();
  ComplexMatrix out = x.matrix();
  for (int r = 0; r < d; ++r) {
    std::vector<int> ri = lay.decompose(r);
    for (int c = 0; c < d; ++c) {
      std::vector<int> ci = lay.decompose(c);
      for (std::size_t k = 0; k < lay.size(); ++k) {
        if (sel[k] && ri[k] != ci[k]) {
          out(r, c) = 0.0;
          break;
        }
      }
    }
  }
  return HermitianOperator(lay, std::move(out));
}

ComplexMatrix embed_bipartite(const SystemLayout& layout, const ComplexMatrix& op_a,
                              const ComplexMatrix& op_b) {
  const int da = layout.dim_of_side(Side::A);
  const int db = layout.dim_of_side(Side::B);
  if (op_a.rows() != da || op_a.cols() != da)
    throw std::invalid_argument("embed_bipartite: A operator dimension mismatch");
  if (op_b.rows() != db || op_b.cols() != db)
    throw std::invalid_argument("embed_bipartite: B operator dimension mismatch");

  const int d = layout.dim();
  ComplexMatrix out(d, d);
  for (int r = 0; r < d; ++r) {
    std::vector<int> ri = layout.decompose(r);
    for (int c = 0; c < d; ++c) {
      std::vector<int> ci = layout.decompose(c);
      int ra = 0, ca = 0, rb = 0, cb = 0;
      for (std::size_t k = 0; k < layout.size(); ++k) {
        const Factor& f = layout.factor(k);
        if (f.side == Side::A) {
          ra = ra * f.dim + ri[k];
          ca = ca * f.dim + ci[k];
        } else {
          rb = rb * f.dim + ri[k];
          cb = cb * f.dim + ci[k];
        }
      }
      out(r, c) = op_a(ra, ca) * op_b(rb, cb);
    }
  }
  return out;
}

EigenSystem eig_hermitian(const ComplexMatrix& m) {
  if (max_abs(m - m.adjoint()) > tol::hermiticity)
    throw std::invalid_argument("eig_hermitian: input is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: solver failed");
  // Eigen sorts ascending; flip to descending.
  EigenSystem sys;
  sys.eigenvalues = es.eigenvalues().reverse();
  sys.eigenvectors = es.eigenvectors().rowwise().reverse();
  return sys;
}

EigenSystem eig_hermitian(const HermitianOperator& x) { return eig_hermitian(x.matrix()); }

double fidelity_squared(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.layout() != sigma.layout())
    throw std::invalid_argument("fidelity: layout mismatch");

  // Rank-one inputs reduce to the overlap, which avoids the square-root
  // amplification of eigensolver noise near zero.
  auto pure_overlap = [](const DensityOperator& pure, const DensityOperator& other,
                         double* out) {
    EigenSystem es = eig_hermitian(pure.matrix());
    if (es.eigenvalues(0) < 1.0 - 1e-11) return false;
    const ComplexVector v = es.eigenvectors.col(0);
    *out = (v.adjoint() * other.matrix() * v)(0).real();
    return true;
  };
  double f2 = 0.0;
  if (pure_overlap(sigma, rho, &f2) || pure_overlap(rho, sigma, &f2))
    return std::clamp(f2, 0.0, 1.0);

  // F = tr sqrt( sqrt(rho) sigma sqrt(rho) )
  EigenSystem er = eig_hermitian(rho.matrix());
  RealVector sqrt_ev = er.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  ComplexMatrix sqrt_rho =
      er.eigenvectors * sqrt_ev.asDiagonal() * er.eigenvectors.adjoint();
  ComplexMatrix inner = sqrt_rho * sigma.matrix() * sqrt_rho;
  inner = 0.5 * (inner + inner.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(inner, Eigen::EigenvaluesOnly);
  // Spurious eigenvalues of order machine epsilon would contribute their
  // square roots; cut them relative to the spectral peak.
  const double cut = std::max(es.eigenvalues().maxCoeff(), 0.0) * 1e-14;
  double f = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > cut) f += std::sqrt(es.eigenvalues()(i));
  return std::clamp(f * f, 0.0, 1.0);
}

double trace_norm(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_norm(const HermitianOperator& x) { return trace_norm(x.matrix()); }

double von_neumann_entropy(const DensityOperator& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > tol::log_clamp) h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.layout() != sigma.layout())
    throw std::invalid_argument("relative entropy: layout mismatch");

  EigenSystem es_r = eig_hermitian(rho.matrix());
  EigenSystem es_s = eig_hermitian(sigma.matrix());
  const Eigen::Index n = es_r.eigenvalues.size();

  // Support check: any rho-mass on sigma's null space means +infinity.
  for (Eigen::Index j = 0; j < n; ++j) {
    if (es_s.eigenvalues(j) > tol::support_cut) continue;
    const ComplexVector w = es_s.eigenvectors.col(j);
    const double mass = (w.adjoint() * rho.matrix() * w)(0).real();
    if (mass > tol::support_cut) return std::numeric_limits<double>::infinity();
  }

  double tr_rho_log_rho = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = es_r.eigenvalues(i);
    if (p > tol::log_clamp) tr_rho_log_rho += p * std::log2(p);
  }
  double tr_rho_log_sigma = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double q = es_s.eigenvalues(j);
    if (q <= tol::log_clamp) continue;
    const ComplexVector w = es_s.eigenvectors.col(j);
    const double mass = (w.adjoint() * rho.matrix() * w)(0).real();
    tr_rho_log_sigma += mass * std::log2(q);
  }
  return std::max(tr_rho_log_rho - tr_rho_log_sigma, 0.0);
}

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("binary entropy: argument outside [0,1]");
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

}  // namespace qihier
