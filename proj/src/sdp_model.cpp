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

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "qihier/sdp.hpp"

namespace qihier::sdp {

// --- HermitianEmbedding ------------------------------------------------------

Eigen::MatrixXd HermitianEmbedding::embed(const ComplexMatrix& x) const {
  if (x.rows() != d_ || x.cols() != d_)
    throw std::invalid_argument("embed: matrix dimension mismatch");
  Eigen::MatrixXd s(2 * d_, 2 * d_);
  s.topLeftCorner(d_, d_) = x.real();
  s.bottomRightCorner(d_, d_) = x.real();
  s.bottomLeftCorner(d_, d_) = x.imag();
  s.topRightCorner(d_, d_) = -x.imag();
  return s;
}

ComplexMatrix HermitianEmbedding::extract(const Eigen::MatrixXd& s) const {
  if (s.rows() != 2 * d_ || s.cols() != 2 * d_)
    throw std::invalid_argument("extract: block dimension mismatch");
  Eigen::MatrixXd re = 0.5 * (s.topLeftCorner(d_, d_) + s.bottomRightCorner(d_, d_));
  Eigen::MatrixXd im = 0.5 * (s.bottomLeftCorner(d_, d_) - s.topRightCorner(d_, d_));
  ComplexMatrix x = re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>();
  return 0.5 * (x + x.adjoint().eval());
}

void HermitianEmbedding::append_real_part(std::vector<Term>& out, int block, int p, int q,
                                          double scale) const {
  // Re X[p][q] = (S[p][q] + S[d+p][d+q]) / 2; both copies keep the functional
  // symmetric under the embedding pattern.
  out.push_back({block, p, q, 0.5 * scale});
  out.push_back({block, d_ + p, d_ + q, 0.5 * scale});
}

void HermitianEmbedding::append_imag_part(std::vector<Term>& out, int block, int p, int q,
                                          double scale) const {
  // Im X[p][q] = (S[d+p][q] - S[p][d+q]) / 2.
  out.push_back({block, d_ + p, q, 0.5 * scale});
  out.push_back({block, p, d_ + q, -0.5 * scale});
}

std::vector<Constraint> HermitianEmbedding::structural_constraints(
    int block, const std::string& tag) const {
  std::vector<Constraint> cs;
  // Re block duplicated: S[p][q] == S[d+p][d+q] for p <= q.
  for (int p = 0; p < d_; ++p)
    for (int q = p; q < d_; ++q) {
      Constraint c;
      c.lhs.terms = {{block, p, q, 1.0}, {block, d_ + p, d_ + q, -1.0}};
      c.rhs = 0.0;
      c.tag = tag + ":re-dup";
      cs.push_back(std::move(c));
    }
  // Im block antisymmetric: S[d+p][q] == -S[d+q][p]; diagonal vanishes.
  for (int p = 0; p < d_; ++p) {
    Constraint c;
    c.lhs.terms = {{block, d_ + p, p, 1.0}};
    c.rhs = 0.0;
    c.tag = tag + ":im-diag";
    cs.push_back(std::move(c));
  }
  for (int p = 0; p < d_; ++p)
    for (int q = p + 1; q < d_; ++q) {
      Constraint c;
      c.lhs.terms = {{block, d_ + p, q, 1.0}, {block, d_ + q, p, 1.0}};
      c.rhs = 0.0;
      c.tag = tag + ":im-antisym";
      cs.push_back(std::move(c));
    }
  return cs;
}

// --- OperatorExpr -------------------------------------------------------------

OperatorExpr OperatorExpr::operator-(const OperatorExpr& rhs) const {
  if (layout_ != rhs.layout_) throw std::invalid_argument("operator expr: layout mismatch");
  OperatorExpr out = *this;
  out.constant_ -= rhs.constant_;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    for (auto t : rhs.terms_[i]) {
      t.weight = -t.weight;
      out.terms_[i].push_back(t);
    }
  return out;
}

OperatorExpr OperatorExpr::operator+(const OperatorExpr& rhs) const {
  if (layout_ != rhs.layout_) throw std::invalid_argument("operator expr: layout mismatch");
  OperatorExpr out = *this;
  out.constant_ += rhs.constant_;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    out.terms_[i].insert(out.terms_[i].end(), rhs.terms_[i].begin(), rhs.terms_[i].end());
  return out;
}

// --- OperatorModel ------------------------------------------------------------

OperatorVar OperatorModel::add_hermitian_var(const std::string& name,
                                             const SystemLayout& layout) {
  VarInfo info{layout, 0, HermitianEmbedding(layout.dim())};
  info.block = problem_->add_block(name, info.emb.block_dim());
  for (auto& c : info.emb.structural_constraints(info.block, name)) {
    problem_->constraints.push_back(std::move(c));
  }
  vars_.push_back(std::move(info));
  return OperatorVar{static_cast<int>(vars_.size()) - 1};
}

const SystemLayout& OperatorModel::layout_of(OperatorVar v) const {
  return vars_.at(v.id).layout;
}

OperatorExpr OperatorModel::var(OperatorVar v) const {
  const VarInfo& info = vars_.at(v.id);
  const int d = info.layout.dim();
  OperatorExpr e;
  e.layout_ = info.layout;
  e.terms_.assign(static_cast<std::size_t>(d) * d, {});
  e.constant_ = ComplexMatrix::Zero(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) e.terms_[r * d + c].push_back({v.id, r, c, Complex(1.0, 0.0)});
  return e;
}

OperatorExpr OperatorModel::constant(const SystemLayout& layout, const ComplexMatrix& value) const {
  OperatorExpr e;
  e.layout_ = layout;
  e.terms_.assign(static_cast<std::size_t>(layout.dim()) * layout.dim(), {});
  e.constant_ = value;
  return e;
}

OperatorExpr OperatorModel::partial_transpose(const OperatorExpr& e,
                                              const std::set<std::string>& on) const {
  const SystemLayout& lay = e.layout_;
  for (const auto& l : on)
    if (!lay.has_label(l)) throw std::invalid_argument("partial transpose: unknown label " + l);
  const int d = lay.dim();
  std::vector<bool> flip(lay.size(), false);
  for (std::size_t k = 0; k < lay.size(); ++k) flip[k] = on.count(lay.factor(k).label) > 0;

  OperatorExpr out;
  out.layout_ = lay;
  out.terms_.assign(static_cast<std::size_t>(d) * d, {});
  out.constant_ = ComplexMatrix::Zero(d, d);
  for (int r = 0; r < d; ++r) {
    std::vector<int> ri = lay.decompose(r);
    for (int c = 0; c < d; ++c) {
      std::vector<int> ci = lay.decompose(c);
      std::vector<int> rs = ri, cs = ci;
      for (std::size_t k = 0; k < lay.size(); ++k)
        if (flip[k]) std::swap(rs[k], cs[k]);
      const int rd = lay.compose(rs), cd = lay.compose(cs);
      out.terms_[rd * d + cd] = e.terms_[r * d + c];
      out.constant_(rd, cd) = e.constant_(r, c);
    }
  }
  return out;
}

OperatorExpr OperatorModel::weighted_partial_trace(const OperatorExpr& e,
                                                   const ComplexMatrix& weight,
                                                   const std::set<std::string>& drop) const {
  const SystemLayout& lay = e.layout_;
  std::vector<Factor> kept_f, dropped_f;
  std::vector<bool> dropped(lay.size(), false);
  for (const auto& l : drop)
    if (!lay.has_label(l)) throw std::invalid_argument("weighted trace: unknown label " + l);
  for (std::size_t k = 0; k < lay.size(); ++k) {
    if (drop.count(lay.factor(k).label)) {
      dropped[k] = true;
      dropped_f.push_back(lay.factor(k));
    } else {
      kept_f.push_back(lay.factor(k));
    }
  }
  SystemLayout kept_lay(kept_f);
  SystemLayout drop_lay(dropped_f);
  if (weight.rows() != drop_lay.dim() || weight.cols() != drop_lay.dim())
    throw std::invalid_argument("weighted trace: weight dimension mismatch");

  const int d = lay.dim();
  const int dk = kept_lay.dim();
  OperatorExpr out;
  out.layout_ = kept_lay;
  out.terms_.assign(static_cast<std::size_t>(dk) * dk, {});
  out.constant_ = ComplexMatrix::Zero(dk, dk);

  // out[rk, ck] = sum_{p,q} W[p,q] e[(rk,p),(ck,q)], indices interleaved per layout.
  for (int r = 0; r < d; ++r) {
    std::vector<int> ri = lay.decompose(r);
    for (int c = 0; c < d; ++c) {
      std::vector<int> ci = lay.decompose(c);
      int rk = 0, ck = 0, p = 0, q = 0;
      for (std::size_t k = 0; k < lay.size(); ++k) {
        if (dropped[k]) {
          p = p * lay.factor(k).dim + ri[k];
          q = q * lay.factor(k).dim + ci[k];
        } else {
          rk = rk * lay.factor(k).dim + ri[k];
          ck = ck * lay.factor(k).dim + ci[k];
        }
      }
      const Complex w = weight(p, q);
      if (w == Complex(0.0, 0.0)) continue;
      auto& bucket = out.terms_[rk * dk + ck];
      for (auto t : e.terms_[r * d + c]) {
        t.weight *= w;
        bucket.push_back(t);
      }
      out.constant_(rk, ck) += w * e.constant_(r, c);
    }
  }
  return out;
}

OperatorExpr OperatorModel::partial_trace(const OperatorExpr& e,
                                          const std::set<std::string>& drop) const {
  std::vector<Factor> dropped_f;
  for (const auto& f : e.layout_.factors())
    if (drop.count(f.label)) dropped_f.push_back(f);
  SystemLayout drop_lay(dropped_f);
  return weighted_partial_trace(
      e, ComplexMatrix::Identity(drop_lay.dim(), drop_lay.dim()), drop);
}

void OperatorModel::append_entry_terms(std::vector<Term>& out, const OperatorExpr& e, int r,
                                       int c, bool imag_part, double scale) const {
  const int d = e.layout_.dim();
  for (const auto& t : e.terms_[r * d + c]) {
    const VarInfo& info = vars_.at(t.var);
    // weight * X[p][q]: real part is Re(w) Re(X) - Im(w) Im(X), etc.
    const double wr = t.weight.real(), wi = t.weight.imag();
    if (!imag_part) {
      if (wr != 0.0) info.emb.append_real_part(out, info.block, t.p, t.q, scale * wr);
      if (wi != 0.0) info.emb.append_imag_part(out, info.block, t.p, t.q, -scale * wi);
    } else {
      if (wi != 0.0) info.emb.append_real_part(out, info.block, t.p, t.q, scale * wi);
      if (wr != 0.0) info.emb.append_imag_part(out, info.block, t.p, t.q, scale * wr);
    }
  }
}

void OperatorModel::equality_of_operators(const OperatorExpr& e, const ComplexMatrix& target,
                                          const std::string& tag) {
  const int d = e.layout_.dim();
  if (target.rows() != d || target.cols() != d)
    throw std::invalid_argument("equality: target dimension mismatch");
  // Upper triangle only; expressions are Hermitian-valued by construction.
  for (int r = 0; r < d; ++r) {
    for (int c = r; c < d; ++c) {
      Constraint re;
      append_entry_terms(re.lhs.terms, e, r, c, false, 1.0);
      re.rhs = target(r, c).real() - e.constant_(r, c).real();
      re.tag = tag + ":re(" + std::to_string(r) + "," + std::to_string(c) + ")";
      problem_->constraints.push_back(std::move(re));
      if (c > r) {
        Constraint im;
        append_entry_terms(im.lhs.terms, e, r, c, true, 1.0);
        im.rhs = target(r, c).imag() - e.constant_(r, c).imag();
        im.tag = tag + ":im(" + std::to_string(r) + "," + std::to_string(c) + ")";
        problem_->constraints.push_back(std::move(im));
      }
    }
  }
}

void OperatorModel::diagonal_only(const OperatorExpr& e, const std::set<std::string>& factors,
                                  const std::string& tag) {
  const SystemLayout& lay = e.layout_;
  for (const auto& l : factors)
    if (!lay.has_label(l)) throw std::invalid_argument("diagonal_only: unknown label " + l);
  const int d = lay.dim();
  std::vector<bool> sel(lay.size(), false);
  for (std::size_t k = 0; k < lay.size(); ++k) sel[k] = factors.count(lay.factor(k).label) > 0;

  for (int r = 0; r < d; ++r) {
    std::vector<int> ri = lay.decompose(r);
    for (int c = r + 1; c < d; ++c) {
      std::vector<int> ci = lay.decompose(c);
      bool couples = false;
      for (std::size_t k = 0; k < lay.size() && !couples; ++k)
        couples = sel[k] && ri[k] != ci[k];
      if (!couples) continue;
      Constraint re;
      append_entry_terms(re.lhs.terms, e, r, c, false, 1.0);
      re.rhs = -e.constant_(r, c).real();
      re.tag = tag + ":re(" + std::to_string(r) + "," + std::to_string(c) + ")";
      problem_->constraints.push_back(std::move(re));
      Constraint im;
      append_entry_terms(im.lhs.terms, e, r, c, true, 1.0);
      im.rhs = -e.constant_(r, c).imag();
      im.tag = tag + ":im(" + std::to_string(r) + "," + std::to_string(c) + ")";
      problem_->constraints.push_back(std::move(im));
    }
  }
}

void OperatorModel::partial_trace_equals(const OperatorExpr& e, const std::set<std::string>& drop,
                                         const ComplexMatrix& target, const std::string& tag) {
  equality_of_operators(partial_trace(e, drop), target, tag);
}

OperatorVar OperatorModel::psd_linked_block(const OperatorExpr& e, const std::string& name) {
  OperatorVar y = add_hermitian_var(name, e.layout());
  equality_of_operators(var(y) - e, ComplexMatrix::Zero(e.layout().dim(), e.layout().dim()),
                        name + ":link");
  return y;
}

void OperatorModel::add_objective_inner_product(const ComplexMatrix& h, const OperatorExpr& e) {
  const int d = e.layout_.dim();
  if (h.rows() != d || h.cols() != d)
    throw std::invalid_argument("objective: matrix dimension mismatch");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > tol::hermiticity)
    throw std::invalid_argument("objective: matrix must be Hermitian");
  // tr(H E) = sum_{r,c} H[r][c] E[c][r]; real by Hermiticity of both sides.
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const Complex w = h(r, c);
      if (w == Complex(0.0, 0.0)) continue;
      // Re(w * E[c][r]) = Re w Re E - Im w Im E.
      append_entry_terms(problem_->objective.terms, e, c, r, false, w.real());
      append_entry_terms(problem_->objective.terms, e, c, r, true, -w.imag());
    }
}

void OperatorModel::maximize_real_inner_product(const ComplexMatrix& h, const OperatorExpr& e) {
  problem_->objective.terms.clear();
  add_objective_inner_product(h, e);
}

ComplexMatrix OperatorModel::value(OperatorVar v, const SdpSolution& s) const {
  const VarInfo& info = vars_.at(v.id);
  return info.emb.extract(s.blocks.at(info.block));
}

// --- plain-text dump ------------------------------------------------------------

void dump_problem(const SdpProblem& p, std::ostream& os) {
  os << "sdp 1\n";
  os << "blocks " << p.blocks.size() << "\n";
  for (const auto& b : p.blocks) os << b.name << " " << b.dim << "\n";
  os.precision(17);
  os << "objective " << p.objective.terms.size() << "\n";
  for (const auto& t : p.objective.terms)
    os << t.block << " " << t.row << " " << t.col << " " << t.value << "\n";
  os << "constraints " << p.constraints.size() << "\n";
  for (const auto& c : p.constraints) {
    os << "constraint " << c.rhs << " " << c.lhs.terms.size() << "\n";
    for (const auto& t : c.lhs.terms)
      os << t.block << " " << t.row << " " << t.col << " " << t.value << "\n";
  }
}

namespace {
std::string next_token(std::istream& is) {
  std::string tok;
  if (!(is >> tok)) throw std::invalid_argument("sdp file: unexpected end of input");
  return tok;
}
}  // namespace

SdpProblem parse_problem(std::istream& is) {
  SdpProblem p;
  if (next_token(is) != "sdp") throw std::invalid_argument("sdp file: missing magic");
  if (next_token(is) != "1") throw std::invalid_argument("sdp file: unsupported version");
  if (next_token(is) != "blocks") throw std::invalid_argument("sdp file: expected 'blocks'");
  int nblocks = std::stoi(next_token(is));
  for (int i = 0; i < nblocks; ++i) {
    std::string name = next_token(is);
    int dim = std::stoi(next_token(is));
    p.add_block(name, dim);
  }
  auto read_terms = [&is, &p](int count) {
    std::vector<Term> terms;
    terms.reserve(count);
    for (int i = 0; i < count; ++i) {
      Term t;
      t.block = std::stoi(next_token(is));
      t.row = std::stoi(next_token(is));
      t.col = std::stoi(next_token(is));
      t.value = std::stod(next_token(is));
      if (t.block < 0 || t.block >= static_cast<int>(p.blocks.size()))
        throw std::invalid_argument("sdp file: block index out of range");
      terms.push_back(t);
    }
    return terms;
  };
  if (next_token(is) != "objective") throw std::invalid_argument("sdp file: expected 'objective'");
  p.objective.terms = read_terms(std::stoi(next_token(is)));
  if (next_token(is) != "constraints")
    throw std::invalid_argument("sdp file: expected 'constraints'");
  const int m = std::stoi(next_token(is));
  for (int i = 0; i < m; ++i) {
    if (next_token(is) != "constraint")
      throw std::invalid_argument("sdp file: expected 'constraint'");
    Constraint c;
    c.rhs = std::stod(next_token(is));
    c.lhs.terms = read_terms(std::stoi(next_token(is)));
    c.tag = "file:" + std::to_string(i);
    p.constraints.push_back(std::move(c));
  }
  return p;
}

}  // namespace qihier::sdp
