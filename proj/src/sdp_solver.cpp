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

#include <algorithm>
#include <cassert>
#include <cmath>
#include <iostream>
#include <map>
#include <numeric>

#include "qihier/sdp.hpp"

namespace qihier::sdp {

int SdpProblem::add_block(const std::string& name, int dim) {
  if (dim < 1) throw std::invalid_argument("sdp block: dimension must be >= 1");
  blocks.push_back({name, dim});
  return static_cast<int>(blocks.size()) - 1;
}

int SdpProblem::total_block_dim() const {
  int n = 0;
  for (const auto& b : blocks) n += b.dim;
  return n;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

// --- canonical sparse symmetric functionals ---------------------------------

struct CanonEntry {
  int r = 0, c = 0;  // r <= c
  double v = 0.0;    // symmetric matrix coefficient A[r][c] = A[c][r] = v
};

struct CanonSlice {
  int block = 0;
  std::vector<CanonEntry> entries;
};

struct CanonFunc {
  std::vector<CanonSlice> slices;
};

// tr(A X) with the canonical convention above.
double dot_with_blocks(const CanonFunc& f, const std::vector<Eigen::MatrixXd>& x) {
  double acc = 0.0;
  for (const auto& s : f.slices) {
    const Eigen::MatrixXd& m = x[s.block];
    for (const auto& e : s.entries) acc += (e.r == e.c ? e.v : 2.0 * e.v) * m(e.r, e.c);
  }
  return acc;
}

void add_scaled(std::vector<Eigen::MatrixXd>& x, const CanonFunc& f, double scale) {
  for (const auto& s : f.slices) {
    Eigen::MatrixXd& m = x[s.block];
    for (const auto& e : s.entries) {
      m(e.r, e.c) += scale * e.v;
      if (e.r != e.c) m(e.c, e.r) += scale * e.v;
    }
  }
}

double frob_norm(const CanonFunc& f) {
  double acc = 0.0;
  for (const auto& s : f.slices)
    for (const auto& e : s.entries) acc += (e.r == e.c ? 1.0 : 2.0) * e.v * e.v;
  return std::sqrt(acc);
}

void scale_func(CanonFunc& f, double scale) {
  for (auto& s : f.slices)
    for (auto& e : s.entries) e.v *= scale;
}

CanonFunc canonicalize(const LinearFunctional& f, const std::vector<BlockSpec>& blocks) {
  // Accumulate literal coefficients into upper-triangular symmetric form:
  // v * X[r][c] contributes v to A[r][r] on the diagonal and v/2 to the
  // symmetric pair otherwise.
  std::map<std::tuple<int, int, int>, double> acc;
  for (const auto& t : f.terms) {
    if (t.block < 0 || t.block >= static_cast<int>(blocks.size()))
      throw std::invalid_argument("sdp functional: block index out of range");
    const int d = blocks[t.block].dim;
    if (t.row < 0 || t.col < 0 || t.row >= d || t.col >= d)
      throw std::invalid_argument("sdp functional: entry index out of range");
    const int r = std::min(t.row, t.col);
    const int c = std::max(t.row, t.col);
    acc[{t.block, r, c}] += (r == c) ? t.value : 0.5 * t.value;
  }
  CanonFunc out;
  int cur_block = -1;
  for (const auto& [key, v] : acc) {
    if (v == 0.0) continue;
    const auto& [blk, r, c] = key;
    if (blk != cur_block) {
      out.slices.push_back({blk, {}});
      cur_block = blk;
    }
    out.slices.back().entries.push_back({r, c, v});
  }
  return out;
}

// --- presolve ----------------------------------------------------------------

struct Presolved {
  std::vector<CanonFunc> rows;       // kept constraints, normalized
  Eigen::VectorXd b;                 // matching right-hand sides
  std::vector<int> kept;             // original indices
  std::vector<double> row_scale;     // norm the row was divided by
  bool inconsistent = false;
  std::string message;
};

// Gram matrix of normalized constraint rows under the trace inner product.
Eigen::MatrixXd gram_matrix(const std::vector<CanonFunc>& rows) {
  const int m = static_cast<int>(rows.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
  // Invert the entry->rows map so only overlapping pairs are touched.
  std::map<std::tuple<int, int, int>, std::vector<std::pair<int, double>>> index;
  for (int i = 0; i < m; ++i)
    for (const auto& s : rows[i].slices)
      for (const auto& e : s.entries)
        index[{s.block, e.r, e.c}].push_back({i, (e.r == e.c ? 1.0 : 2.0) * e.v});
  for (const auto& [key, hits] : index) {
    const auto& [blk, r, c] = key;
    const double w = (r == c) ? 1.0 : 0.5;  // undo one doubling: <A,B> pairs carry 2vw
    for (std::size_t a = 0; a < hits.size(); ++a)
      for (std::size_t bidx = a; bidx < hits.size(); ++bidx) {
        const double contrib = w * hits[a].second * hits[bidx].second;
        g(hits[a].first, hits[bidx].first) += contrib;
        if (hits[a].first != hits[bidx].first) g(hits[bidx].first, hits[a].first) += contrib;
      }
  }
  return g;
}

// Rank-revealing pass: pivoted Cholesky of the Gram matrix doubles as
// Gram-Schmidt, so dependent rows come with expansion coefficients and the
// right-hand sides can be checked for consistency.
Presolved presolve(const std::vector<CanonFunc>& all_rows, const Eigen::VectorXd& all_b,
                   double threshold, bool* used_pivoting) {
  Presolved out;
  const int m = static_cast<int>(all_rows.size());

  std::vector<CanonFunc> rows;
  std::vector<double> bs, scales;
  std::vector<int> orig;
  for (int i = 0; i < m; ++i) {
    CanonFunc f = all_rows[i];
    const double nrm = frob_norm(f);
    if (nrm <= threshold) {
      if (std::abs(all_b(i)) > 1e-8) {
        out.inconsistent = true;
        out.message = "constraint " + std::to_string(i) + " has zero lhs but rhs " +
                      std::to_string(all_b(i));
        return out;
      }
      continue;  // trivially satisfied
    }
    scale_func(f, 1.0 / nrm);
    rows.push_back(std::move(f));
    bs.push_back(all_b(i) / nrm);
    scales.push_back(nrm);
    orig.push_back(i);
  }
  const int mr = static_cast<int>(rows.size());
  if (mr == 0) {
    out.b.resize(0);
    return out;
  }

  Eigen::MatrixXd g = gram_matrix(rows);

  // Fast path: rows independent and well conditioned, nothing to drop.
  {
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() == Eigen::Success) {
      const double min_d = llt.matrixLLT().diagonal().minCoeff();
      if (min_d * min_d > threshold) {
        out.rows = std::move(rows);
        out.b = Eigen::Map<Eigen::VectorXd>(bs.data(), mr);
        out.kept = std::move(orig);
        out.row_scale = std::move(scales);
        if (used_pivoting) *used_pivoting = false;
        return out;
      }
    }
  }
  if (used_pivoting) *used_pivoting = true;

  // Pivoted Cholesky of the Gram matrix; doubles as Gram-Schmidt so the
  // coefficients lt(:, i) of each row against the selected set fall out.
  // lt is stored transposed to keep the inner dot products contiguous.
  std::vector<int> order;
  std::vector<bool> taken(mr, false);
  Eigen::MatrixXd lt = Eigen::MatrixXd::Zero(mr, mr);  // lt(k, i) = L[i][k]
  Eigen::VectorXd beta(mr);                            // Gram-Schmidt image of b
  int rank = 0;
  for (int step = 0; step < mr; ++step) {
    int piv = -1;
    double best = threshold;
    for (int i = 0; i < mr; ++i)
      if (!taken[i] && g(i, i) > best) {
        best = g(i, i);
        piv = i;
      }
    if (piv < 0) break;
    taken[piv] = true;
    order.push_back(piv);
    const double d = std::sqrt(g(piv, piv));
    beta(rank) = (bs[piv] - lt.col(piv).head(rank).dot(beta.head(rank))) / d;
    for (int i = 0; i < mr; ++i) {
      if (taken[i] && i != piv) continue;
      const double val = g(i, piv) - lt.col(i).head(rank).dot(lt.col(piv).head(rank));
      lt(rank, i) = val / d;
    }
    lt(rank, piv) = d;
    for (int i = 0; i < mr; ++i)
      if (!taken[i]) g(i, i) -= lt(rank, i) * lt(rank, i);
    ++rank;
  }

  // Dependent rows must have consistent right-hand sides.
  for (int i = 0; i < mr; ++i) {
    if (taken[i]) continue;
    const double implied = lt.col(i).head(rank).dot(beta.head(rank));
    if (std::abs(bs[i] - implied) > 1e-7) {
      out.inconsistent = true;
      out.message = "constraint " + std::to_string(orig[i]) +
                    " is linearly dependent with inconsistent rhs (gap " +
                    std::to_string(std::abs(bs[i] - implied)) + ")";
      return out;
    }
  }

  std::sort(order.begin(), order.end());  // keep original relative order
  for (int idx : order) {
    out.rows.push_back(std::move(rows[idx]));
    out.kept.push_back(orig[idx]);
    out.row_scale.push_back(scales[idx]);
  }
  out.b.resize(rank);
  for (int k = 0; k < rank; ++k) out.b(k) = bs[order[k]];
  return out;
}

// --- NT scaling ----------------------------------------------------------------

struct Scaling {
  std::vector<Eigen::MatrixXd> w;      // NT point per block: W Z W = X
  std::vector<Eigen::MatrixXd> z_inv;  // per block
};

Eigen::MatrixXd sym_sqrt(const Eigen::MatrixXd& m, bool invert) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const double floor_ev = std::max(es.eigenvalues().maxCoeff(), 1.0) * 1e-300;
  Eigen::VectorXd d = es.eigenvalues().cwiseMax(floor_ev);
  Eigen::VectorXd s = d.cwiseSqrt();
  if (invert) s = s.cwiseInverse();
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
}

bool compute_scaling(const std::vector<Eigen::MatrixXd>& x, const std::vector<Eigen::MatrixXd>& z,
                     Scaling& out) {
  const std::size_t nb = x.size();
  out.w.resize(nb);
  out.z_inv.resize(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    Eigen::MatrixXd xh = sym_sqrt(x[k], false);
    Eigen::MatrixXd mid = xh * z[k] * xh;
    mid = 0.5 * (mid + mid.transpose().eval());
    Eigen::MatrixXd mid_isqrt = sym_sqrt(mid, true);
    out.w[k] = xh * mid_isqrt * xh;
    out.w[k] = 0.5 * (out.w[k] + out.w[k].transpose().eval());
    Eigen::LLT<Eigen::MatrixXd> llt(z[k]);
    if (llt.info() != Eigen::Success) return false;
    out.z_inv[k] =
        llt.solve(Eigen::MatrixXd::Identity(z[k].rows(), z[k].cols()));
    out.z_inv[k] = 0.5 * (out.z_inv[k] + out.z_inv[k].transpose().eval());
  }
  return true;
}

// Largest alpha in (0, 1] with X + alpha dX psd, shrunk by the boundary factor.
double step_length(const std::vector<Eigen::MatrixXd>& x, const std::vector<Eigen::MatrixXd>& dx,
                   double boundary) {
  double alpha = 1.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    Eigen::LLT<Eigen::MatrixXd> llt(x[k]);
    if (llt.info() != Eigen::Success) return 0.0;
    Eigen::MatrixXd l = llt.matrixL();
    Eigen::MatrixXd m = l.triangularView<Eigen::Lower>().solve(dx[k]);
    m = l.triangularView<Eigen::Lower>().solve(m.transpose().eval());
    m = 0.5 * (m + m.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const double lam = es.eigenvalues().minCoeff();
    if (lam < -1e-14) alpha = std::min(alpha, std::min(1.0, -boundary / lam));
  }
  return alpha;
}

struct WorkBlocks {
  std::vector<Eigen::MatrixXd> m;
  void zero_like(const std::vector<Eigen::MatrixXd>& ref) {
    m.resize(ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k)
      m[k] = Eigen::MatrixXd::Zero(ref[k].rows(), ref[k].cols());
  }
};

}  // namespace

SdpSolution solve(const SdpProblem& p, const SolveOptions& opts) {
  SdpSolution sol;
  const int nblocks = static_cast<int>(p.blocks.size());
  if (nblocks == 0) throw std::invalid_argument("sdp solve: problem has no blocks");
  const int m_orig = static_cast<int>(p.constraints.size());

  // Canonicalize.
  CanonFunc cobj = canonicalize(p.objective, p.blocks);
  std::vector<CanonFunc> rows_all(m_orig);
  Eigen::VectorXd b_all(m_orig);
  for (int i = 0; i < m_orig; ++i) {
    rows_all[i] = canonicalize(p.constraints[i].lhs, p.blocks);
    b_all(i) = p.constraints[i].rhs;
  }

  Presolved pre = presolve(rows_all, b_all, 1e-10, nullptr);
  if (pre.inconsistent) {
    sol.status = SolveStatus::infeasible;
    sol.message = "presolve: " + pre.message;
    sol.dual.assign(m_orig, 0.0);
    return sol;
  }
  const int m = static_cast<int>(pre.rows.size());
  const std::vector<CanonFunc>& rows = pre.rows;
  const Eigen::VectorXd& b = pre.b;

  // Dense objective per block, for residuals.
  std::vector<Eigen::MatrixXd> cmat(nblocks);
  for (int k = 0; k < nblocks; ++k)
    cmat[k] = Eigen::MatrixXd::Zero(p.blocks[k].dim, p.blocks[k].dim);
  add_scaled(cmat, cobj, 1.0);
  double cnorm = 0.0;
  for (const auto& c : cmat) cnorm = std::max(cnorm, c.cwiseAbs().maxCoeff());

  const int n_total = p.total_block_dim();
  const double bnorm = m > 0 ? b.cwiseAbs().maxCoeff() : 0.0;

  // Interior start.
  const double xi = std::max(10.0, std::sqrt(static_cast<double>(n_total)));
  const double eta = std::max({10.0, std::sqrt(static_cast<double>(n_total)), cnorm});
  std::vector<Eigen::MatrixXd> x(nblocks), z(nblocks);
  for (int k = 0; k < nblocks; ++k) {
    x[k] = xi * Eigen::MatrixXd::Identity(p.blocks[k].dim, p.blocks[k].dim);
    z[k] = eta * Eigen::MatrixXd::Identity(p.blocks[k].dim, p.blocks[k].dim);
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  auto primal_obj = [&] { return dot_with_blocks(cobj, x); };
  auto dual_obj = [&] { return m > 0 ? b.dot(y) : 0.0; };

  auto finish_optimal = [&](int iters) {
    sol.status = SolveStatus::optimal;
    sol.blocks = x;
    sol.primal_objective = primal_obj();
    sol.dual_objective = dual_obj();
    sol.gap = sol.dual_objective - sol.primal_objective;
    sol.iterations = iters;
    sol.dual.assign(m_orig, 0.0);
    for (int i = 0; i < m; ++i) sol.dual[pre.kept[i]] = y(i) / pre.row_scale[i];
  };

  Scaling sc;
  WorkBlocks dx, dz, rd, work;
  dx.zero_like(x);
  dz.zero_like(x);
  rd.zero_like(x);
  work.zero_like(x);
  Eigen::MatrixXd h(m, m);
  Eigen::VectorXd rp(m), q(m), dy(m), dy_cor(m);

  int stalls = 0;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    // Residuals r_p = b - A(X), R_d = C + Z - A*(y).
    for (int i = 0; i < m; ++i) rp(i) = b(i) - dot_with_blocks(rows[i], x);
    for (int k = 0; k < nblocks; ++k) rd.m[k] = cmat[k] + z[k];
    for (int i = 0; i < m; ++i) add_scaled(rd.m, rows[i], -y(i));

    double mu = 0.0;
    for (int k = 0; k < nblocks; ++k) mu += (x[k].array() * z[k].array()).sum();
    mu /= n_total;

    const double pobj = primal_obj();
    const double dobj = dual_obj();
    double xtrace = 0.0;
    for (int k = 0; k < nblocks; ++k) xtrace += x[k].trace();
    if (!std::isfinite(pobj) || !std::isfinite(dobj) || !std::isfinite(mu) ||
        xtrace > 1e14 * (1.0 + xi * n_total)) {
      sol.status = SolveStatus::numerical_failure;
      sol.message = "iterates diverged; the problem may be unbounded";
      sol.iterations = iter;
      sol.dual.assign(m_orig, 0.0);
      return sol;
    }
    const double pinf = m > 0 ? rp.cwiseAbs().maxCoeff() / (1.0 + bnorm) : 0.0;
    double dinf = 0.0;
    for (int k = 0; k < nblocks; ++k) dinf = std::max(dinf, rd.m[k].cwiseAbs().maxCoeff());
    dinf /= 1.0 + cnorm;
    const double relgap = std::abs(dobj - pobj) / (1.0 + std::max(std::abs(pobj), std::abs(dobj)));

#ifndef NDEBUG
    {
      // Weak duality with residual slack; exact once feasible.
      double slack = std::abs(rp.dot(y));
      for (int k = 0; k < nblocks; ++k) slack += std::abs((rd.m[k].array() * x[k].array()).sum());
      assert(dobj - pobj >= -slack - 1e-7 * (1.0 + std::abs(pobj)));
    }
#endif

    if (opts.verbose)
      std::cerr << "iter " << iter << " pobj " << pobj << " dobj " << dobj << " gap " << relgap
                << " pinf " << pinf << " dinf " << dinf << " mu " << mu << "\n";

    if (pinf <= opts.feas_tol && dinf <= opts.feas_tol && relgap <= opts.gap_tol) {
      finish_optimal(iter);
      return sol;
    }

    // Farkas-style improving-ray test for primal infeasibility.
    if (m > 0) {
      const double ynorm = y.norm();
      if (ynorm > 1e4 && b.dot(y) < 0) {
        Eigen::VectorXd ray = y / ynorm;
        if (b.dot(ray) <= -1e-4) {
          WorkBlocks aty;
          aty.zero_like(x);
          for (int i = 0; i < m; ++i) add_scaled(aty.m, rows[i], ray(i));
          double min_eig = 0.0;
          for (int k = 0; k < nblocks; ++k) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(aty.m[k], Eigen::EigenvaluesOnly);
            min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
          }
          if (min_eig >= -1e-7) {
            sol.status = SolveStatus::infeasible;
            sol.message = "dual improving ray found (b'y = " + std::to_string(b.dot(ray)) +
                          ", min eig A*(y) = " + std::to_string(min_eig) + ")";
            sol.iterations = iter;
            sol.infeasibility_ray.assign(m_orig, 0.0);
            for (int i = 0; i < m; ++i)
              sol.infeasibility_ray[pre.kept[i]] = ray(i) / pre.row_scale[i];
            return sol;
          }
        }
      }
    }

    if (!compute_scaling(x, z, sc)) {
      sol.status = SolveStatus::numerical_failure;
      sol.message = "scaling factorization broke down";
      sol.iterations = iter;
      sol.dual.assign(m_orig, 0.0);
      return sol;
    }

    // Schur complement H_ij = <A_i, W A_j W>, built column by column.
    h.setZero();
    std::vector<Eigen::MatrixXd> bj(nblocks);
    for (int j = 0; j < m; ++j) {
      std::vector<char> touched(nblocks, 0);
      for (const auto& s : rows[j].slices) {
        if (!touched[s.block]) {
          bj[s.block].setZero(p.blocks[s.block].dim, p.blocks[s.block].dim);
          touched[s.block] = 1;
        }
        const Eigen::MatrixXd& w = sc.w[s.block];
        Eigen::MatrixXd& acc = bj[s.block];
        for (const auto& e : s.entries) {
          if (e.r == e.c) {
            acc.noalias() += e.v * (w.col(e.r) * w.row(e.r));
          } else {
            acc.noalias() += e.v * (w.col(e.r) * w.row(e.c));
            acc.noalias() += e.v * (w.col(e.c) * w.row(e.r));
          }
        }
      }
      for (int i = 0; i <= j; ++i) {
        double acc = 0.0;
        for (const auto& s : rows[i].slices) {
          if (!touched[s.block]) continue;
          const Eigen::MatrixXd& t = bj[s.block];
          for (const auto& e : s.entries) acc += (e.r == e.c ? e.v : 2.0 * e.v) * t(e.r, e.c);
        }
        h(i, j) = acc;
        h(j, i) = acc;
      }
    }

    // The Schur complement turns numerically semidefinite as mu shrinks;
    // escalate a proportional ridge and fall back to pivoted LDLT before
    // giving up.
    Eigen::LLT<Eigen::MatrixXd> hllt;
    Eigen::LDLT<Eigen::MatrixXd> hldlt;
    bool use_ldlt = false;
    {
      double ridge = 0.0;
      const double hscale = m > 0 ? h.diagonal().maxCoeff() : 1.0;
      for (int attempt = 0; attempt < 5; ++attempt) {
        Eigen::MatrixXd hr = h;
        if (ridge > 0) hr.diagonal().array() += ridge * hscale;
        hllt.compute(hr);
        if (hllt.info() == Eigen::Success) break;
        ridge = (ridge == 0.0) ? 1e-14 : ridge * 1e3;
      }
      if (hllt.info() != Eigen::Success) {
        Eigen::MatrixXd hr = h;
        hr.diagonal().array() += 1e-12 * hscale;
        hldlt.compute(hr);
        use_ldlt = hldlt.info() == Eigen::Success && hldlt.isPositive();
        if (!use_ldlt) {
          sol.status = SolveStatus::numerical_failure;
          sol.message = "Schur complement factorization failed";
          sol.iterations = iter;
          sol.dual.assign(m_orig, 0.0);
          return sol;
        }
      }
    }
    // Two rounds of iterative refinement against the unridged matrix keep
    // the Newton directions accurate enough to avoid late-stage stalls.
    auto schur_solve = [&](const Eigen::VectorXd& rhs) {
      Eigen::VectorXd x =
          use_ldlt ? Eigen::VectorXd(hldlt.solve(rhs)) : Eigen::VectorXd(hllt.solve(rhs));
      for (int refine = 0; refine < 2; ++refine) {
        Eigen::VectorXd res = rhs - h.selfadjointView<Eigen::Lower>() * x;
        x += use_ldlt ? Eigen::VectorXd(hldlt.solve(res)) : Eigen::VectorXd(hllt.solve(res));
      }
      return x;
    };

    // Shared pieces: T = W R_d W per block.
    for (int k = 0; k < nblocks; ++k)
      work.m[k].noalias() = sc.w[k] * rd.m[k] * sc.w[k];

    auto solve_direction = [&](const std::vector<Eigen::MatrixXd>& rc, Eigen::VectorXd& dy_out) {
      for (int i = 0; i < m; ++i) {
        double acc = -rp(i);
        for (const auto& s : rows[i].slices)
          for (const auto& e : s.entries)
            acc += (e.r == e.c ? e.v : 2.0 * e.v) * (rc[s.block](e.r, e.c) + work.m[s.block](e.r, e.c));
        q(i) = acc;
      }
      dy_out = schur_solve(q);
      // dZ = A*(dy) - R_d ; dX = R_c - W dZ W.
      for (int k = 0; k < nblocks; ++k) dz.m[k] = -rd.m[k];
      for (int i = 0; i < m; ++i) add_scaled(dz.m, rows[i], dy_out(i));
      for (int k = 0; k < nblocks; ++k) {
        dx.m[k].noalias() = sc.w[k] * dz.m[k] * sc.w[k];
        dx.m[k] = rc[k] - dx.m[k];
        dx.m[k] = 0.5 * (dx.m[k] + dx.m[k].transpose().eval());
        dz.m[k] = 0.5 * (dz.m[k] + dz.m[k].transpose().eval());
      }
    };

    // Predictor: aim at mu = 0.
    std::vector<Eigen::MatrixXd> rc(nblocks);
    for (int k = 0; k < nblocks; ++k) rc[k] = -x[k];
    solve_direction(rc, dy);
    const double ap_aff = step_length(x, dx.m, 0.99);
    const double ad_aff = step_length(z, dz.m, 0.99);

    double gap_aff = 0.0;
    for (int k = 0; k < nblocks; ++k)
      gap_aff += ((x[k] + ap_aff * dx.m[k]).array() * (z[k] + ad_aff * dz.m[k]).array()).sum();
    gap_aff = std::max(gap_aff, 0.0);
    double sigma = std::pow(gap_aff / (mu * n_total), 3.0);
    sigma = std::clamp(sigma, 1e-8, 1.0);

    // Corrector: recenter toward sigma*mu with a Mehrotra second-order term.
    std::vector<Eigen::MatrixXd> dx_aff = dx.m, dz_aff = dz.m;
    for (int k = 0; k < nblocks; ++k) {
      Eigen::MatrixXd second = dx_aff[k] * dz_aff[k] * sc.z_inv[k];
      second = 0.5 * (second + second.transpose().eval());
      rc[k] = sigma * mu * sc.z_inv[k] - x[k] - second;
    }
    solve_direction(rc, dy_cor);

    double ap = step_length(x, dx.m, 0.98);
    double ad = step_length(z, dz.m, 0.98);
    if (ap < 1e-10 && ad < 1e-10) {
      // Fall back to the pure recentering direction before giving up.
      for (int k = 0; k < nblocks; ++k) rc[k] = sigma * mu * sc.z_inv[k] - x[k];
      solve_direction(rc, dy_cor);
      ap = step_length(x, dx.m, 0.98);
      ad = step_length(z, dz.m, 0.98);
      if (ap < 1e-10 && ad < 1e-10 && ++stalls >= 5) {
        sol.status = SolveStatus::numerical_failure;
        sol.message = "step length collapsed";
        sol.iterations = iter;
        sol.dual.assign(m_orig, 0.0);
        return sol;
      }
    } else {
      stalls = 0;
    }

    for (int k = 0; k < nblocks; ++k) {
      x[k] += ap * dx.m[k];
      z[k] += ad * dz.m[k];
      x[k] = 0.5 * (x[k] + x[k].transpose().eval());
      z[k] = 0.5 * (z[k] + z[k].transpose().eval());
    }
    y += ad * dy_cor;
  }

  sol.status = SolveStatus::max_iterations;
  sol.message = "iteration limit reached";
  sol.blocks = x;
  sol.primal_objective = primal_obj();
  sol.dual_objective = dual_obj();
  sol.gap = sol.dual_objective - sol.primal_objective;
  sol.iterations = opts.max_iters;
  sol.dual.assign(m_orig, 0.0);
  for (int i = 0; i < m; ++i) sol.dual[pre.kept[i]] = y(i) / pre.row_scale[i];
  return sol;
}

CertificateReport verify_certificate(const SdpProblem& p, const SdpSolution& s,
                                     const VerifyOptions& opts) {
  CertificateReport rep;
  auto add = [&rep](const std::string& name, double value, double threshold, bool pass) {
    rep.checks.push_back({name, value, threshold, pass});
  };

  const int nblocks = static_cast<int>(p.blocks.size());
  if (static_cast<int>(s.blocks.size()) != nblocks)
    throw std::invalid_argument("verify_certificate: solution block count mismatch");
  if (static_cast<int>(s.dual.size()) != static_cast<int>(p.constraints.size()))
    throw std::invalid_argument("verify_certificate: dual multiplier count mismatch");

  // Primal equality residuals.
  double max_resid = 0.0;
  for (const auto& con : p.constraints) {
    CanonFunc f = canonicalize(con.lhs, p.blocks);
    max_resid = std::max(max_resid, std::abs(dot_with_blocks(f, s.blocks) - con.rhs));
  }
  add("primal equality residual", max_resid, opts.eq_tol, max_resid <= opts.eq_tol);

  // Primal blocks psd.
  double min_block_eig = 0.0;
  for (int k = 0; k < nblocks; ++k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        Eigen::MatrixXd(0.5 * (s.blocks[k] + s.blocks[k].transpose())), Eigen::EigenvaluesOnly);
    min_block_eig = std::min(min_block_eig, es.eigenvalues().minCoeff());
    rep.primal_trace += s.blocks[k].trace();
  }
  add("primal block min eigenvalue", min_block_eig, -opts.psd_tol,
      min_block_eig >= -opts.psd_tol);

  // Dual slack Z = A*(y) - C must be psd.
  std::vector<Eigen::MatrixXd> slack(nblocks);
  for (int k = 0; k < nblocks; ++k)
    slack[k] = Eigen::MatrixXd::Zero(p.blocks[k].dim, p.blocks[k].dim);
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    if (s.dual[i] == 0.0) continue;
    CanonFunc f = canonicalize(p.constraints[i].lhs, p.blocks);
    add_scaled(slack, f, s.dual[i]);
  }
  {
    CanonFunc c = canonicalize(p.objective, p.blocks);
    add_scaled(slack, c, -1.0);
  }
  double min_slack = 0.0;
  for (int k = 0; k < nblocks; ++k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        Eigen::MatrixXd(0.5 * (slack[k] + slack[k].transpose())), Eigen::EigenvaluesOnly);
    min_slack = std::min(min_slack, es.eigenvalues().minCoeff());
  }
  rep.min_dual_slack_eig = min_slack;
  add("dual slack min eigenvalue", min_slack, -opts.psd_tol, min_slack >= -opts.psd_tol);

  // Objectives and gap.
  {
    CanonFunc c = canonicalize(p.objective, p.blocks);
    rep.primal_objective = dot_with_blocks(c, s.blocks);
  }
  rep.dual_objective = 0.0;
  for (std::size_t i = 0; i < p.constraints.size(); ++i)
    rep.dual_objective += s.dual[i] * p.constraints[i].rhs;
  const double gap = rep.dual_objective - rep.primal_objective;
  const double gap_rel = std::abs(gap) / (1.0 + std::max(std::abs(rep.primal_objective),
                                                         std::abs(rep.dual_objective)));
  add("duality gap", gap_rel, opts.gap_tol, gap_rel <= opts.gap_tol);
  // Weak duality: dual upper-bounds primal up to the psd slack allowance.
  const double weak = gap + std::max(0.0, -min_slack) * std::max(rep.primal_trace, 1.0);
  add("weak duality (dual >= primal)", weak, 0.0, weak >= -opts.gap_tol);

  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

}  // namespace qihier::sdp
