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

#include "qihier/distill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace qihier {

namespace {

// Probe images of the optimized channel must match class membership when
// rebuilt from a finite-precision solution; residuals of order
// dim * feas_tol make the library defaults too strict here.
constexpr double kReverifyTol = 1e-6;

std::set<std::string> to_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

struct AssembledDistillation {
  sdp::SdpProblem prob;
  std::unique_ptr<sdp::OperatorModel> model;
  sdp::OperatorVar j;
  SystemLayout in_layout, out_layout;
  double trace_cap = 0.0;  // total feasible block trace, for rigorous bounds
};

AssembledDistillation assemble(const DistillationProblem& p, bool trace_distance_vars,
                               sdp::OperatorVar* p_var, sdp::OperatorVar* n_var) {
  if (p.target_rank < 1) throw std::invalid_argument("distillation: target rank must be >= 1");
  const SystemLayout& in = p.input_state.layout();
  if (in.dim_of_side(Side::B) < 1 || in.labels_of_side(Side::B).empty())
    throw std::invalid_argument("distillation: input needs at least one B factor");

  AssembledDistillation a;
  a.in_layout = in;
  std::string out_label = "Bp";
  while (in.has_label(out_label)) out_label += "_out";
  a.out_layout = make_layout({{out_label, p.target_rank, Side::B}});
  a.model = std::make_unique<sdp::OperatorModel>(a.prob);

  SystemLayout choi_lay = a.out_layout.concat(in);
  a.j = a.model->add_hermitian_var("J", choi_lay);
  sdp::OperatorExpr jexpr = a.model->var(a.j);

  // CP is the block itself; TP pins tr_out J = identity on the input.
  a.model->partial_trace_equals(jexpr, {out_label}, ComplexMatrix::Identity(in.dim(), in.dim()),
                                "tp");
  a.trace_cap = 2.0 * in.dim();  // embedded block doubles the complex trace

  const std::set<std::string> in_labels = to_set(in.all_labels());
  const bool qi_probes = (p.op_class == OpClass::qip || p.op_class == OpClass::qip_ppt);
  if (qi_probes) {
    // Images of rho_{a,b} (x) |j><j| must be incoherent on the output.
    const int da = in.dim_of_side(Side::A);
    const int db = in.dim_of_side(Side::B);
    for (int pa = 0; pa < da; ++pa)
      for (int pb = 0; pb < da; ++pb) {
        const ComplexMatrix rho_ab = basis_state(pa, pb, da).matrix();
        for (int j = 0; j < db; ++j) {
          ComplexMatrix jj = ComplexMatrix::Zero(db, db);
          jj(j, j) = 1.0;
          const ComplexMatrix probe = embed_bipartite(in, rho_ab, jj);
          sdp::OperatorExpr sigma = a.model->weighted_partial_trace(jexpr, probe, in_labels);
          a.model->diagonal_only(sigma, {out_label},
                                 "qi(" + std::to_string(pa) + "," + std::to_string(pb) + "," +
                                     std::to_string(j) + ")");
        }
      }
  } else {
    // Images of every input basis state must be incoherent on the output.
    for (int z = 0; z < in.dim(); ++z) {
      ComplexMatrix probe = ComplexMatrix::Zero(in.dim(), in.dim());
      probe(z, z) = 1.0;
      sdp::OperatorExpr sigma = a.model->weighted_partial_trace(jexpr, probe, in_labels);
      a.model->diagonal_only(sigma, {out_label}, "mio(" + std::to_string(z) + ")");
    }
  }

  if (op_class_has_ppt(p.op_class)) {
    const SystemLayout& choi = a.model->layout_of(a.j);
    const auto a_labels = choi.labels_of_side(Side::A);
    if (!a_labels.empty()) {
      sdp::OperatorExpr pt = a.model->partial_transpose(jexpr, to_set(a_labels));
      a.model->psd_linked_block(pt, "J_TA");
      a.trace_cap += 2.0 * in.dim();
    }
  }

  if (trace_distance_vars) {
    *p_var = a.model->add_hermitian_var("P", a.out_layout);
    *n_var = a.model->add_hermitian_var("N", a.out_layout);
  }
  return a;
}

ChoiOperator rebuild_choi(const AssembledDistillation& a, const sdp::SdpSolution& s) {
  ComplexMatrix j = a.model->value(a.j, s);
  // Exact trace-preservation repair: spread the equality residual over the
  // output so the Choi invariants hold at library tolerances.
  const SystemLayout choi_lay = a.out_layout.concat(a.in_layout);
  HermitianOperator jop(choi_lay, j);
  HermitianOperator reduced = partial_trace(jop, {a.out_layout.factor(0).label});
  ComplexMatrix defect =
      ComplexMatrix::Identity(a.in_layout.dim(), a.in_layout.dim()) - reduced.matrix();
  const int dout = a.out_layout.dim();
  j += kron(ComplexMatrix::Identity(dout, dout), defect) / static_cast<double>(dout);
  return ChoiOperator(a.in_layout, a.out_layout, HermitianOperator(choi_lay, j));
}

void attach_verdicts(const DistillationProblem& p, DistillationResult& r) {
  if (!r.choi) return;
  const bool qi = (p.op_class == OpClass::qip || p.op_class == OpClass::qip_ppt);
  r.class_verdict = qi ? is_qip(*r.choi, kReverifyTol) : is_mio(*r.choi, kReverifyTol);
  if (op_class_has_ppt(p.op_class) &&
      !r.choi->matrix().layout().labels_of_side(Side::A).empty())
    r.ppt_verdict = is_ppt(*r.choi, kReverifyTol);
}

}  // namespace

std::string to_string(OpClass c) {
  switch (c) {
    case OpClass::qip: return "qip";
    case OpClass::qip_ppt: return "qip-ppt";
    case OpClass::mio: return "mio";
    case OpClass::mio_ppt: return "mio-ppt";
  }
  return "unknown";
}

OpClass op_class_from_string(const std::string& s) {
  if (s == "qip") return OpClass::qip;
  if (s == "qip-ppt") return OpClass::qip_ppt;
  if (s == "mio") return OpClass::mio;
  if (s == "mio-ppt") return OpClass::mio_ppt;
  throw std::invalid_argument("unknown operation class '" + s +
                              "' (expected qip, qip-ppt, mio, mio-ppt)");
}

bool op_class_has_ppt(OpClass c) { return c == OpClass::qip_ppt || c == OpClass::mio_ppt; }

DensityOperator build_example_state(double t) {
  if (!(t > 0.0 && t < 0.5))
    throw std::invalid_argument("example state: t out of (0, 0.5)");
  const Complex omega(-0.5, std::sqrt(3.0) / 2.0);
  ComplexVector u(4);
  u << omega, omega * omega, 1.0, 0.0;
  u /= std::sqrt(3.0);
  ComplexVector v(4);
  v << t, t, t, std::sqrt(1.0 - 3.0 * t * t);

  const double w1 = 1.0 / (4.0 - 12.0 * t * t);
  const double w0 = 1.0 - w1;
  ComplexVector psi(8);
  psi.head(4) = std::sqrt(w0) * u;
  psi.tail(4) = std::sqrt(w1) * v;

  SystemLayout lay = make_layout({{"A", 2, Side::A}, {"B", 4, Side::B}});
  return pure_state(lay, psi);
}

DensityOperator maximally_coherent(int m) {
  if (m < 1) throw std::invalid_argument("maximally coherent: rank must be >= 1");
  SystemLayout lay = make_layout({{"B", m, Side::B}});
  return pure_state(lay, ComplexVector::Ones(m));
}

DistillationResult max_fidelity_distillation(const DistillationProblem& p) {
  AssembledDistillation a = assemble(p, false, nullptr, nullptr);

  const ComplexMatrix target = maximally_coherent(p.target_rank).matrix();
  const ComplexMatrix h = kron(target, p.input_state.matrix().transpose().eval());
  a.model->maximize_real_inner_product(h, a.model->var(a.j));

  DistillationResult r;
  sdp::SdpSolution s = sdp::solve(a.prob, p.solve_options);
  r.status = s.status;
  r.iterations = s.iterations;
  r.message = s.message;
  if (s.status != sdp::SolveStatus::optimal) return r;

  r.value = std::clamp(s.primal_objective, 0.0, 1.0);
  r.certificate = sdp::verify_certificate(a.prob, s);
  // Any feasible J obeys the trace cap, so the dual side gives a one-sided
  // bound on the true optimum even with a slightly infeasible certificate.
  r.dual_bound = r.certificate.dual_objective +
                 std::max(0.0, -r.certificate.min_dual_slack_eig) * a.trace_cap;
  r.choi = rebuild_choi(a, s);
  attach_verdicts(p, r);
  return r;
}

DistillationResult min_trace_distance_distillation(const DistillationProblem& p) {
  sdp::OperatorVar pv, nv;
  AssembledDistillation a = assemble(p, true, &pv, &nv);

  // E(psi) - Phi = P - N with P, N psd; minimizing tr(P + N) yields the
  // trace norm of the difference.
  const std::set<std::string> in_labels = to_set(a.in_layout.all_labels());
  sdp::OperatorExpr out_state =
      a.model->weighted_partial_trace(a.model->var(a.j), p.input_state.matrix(), in_labels);
  const ComplexMatrix target = maximally_coherent(p.target_rank).matrix();
  a.model->equality_of_operators(out_state + a.model->var(nv) - a.model->var(pv), target,
                                 "split");

  const int dout = a.out_layout.dim();
  const ComplexMatrix minus_id = -ComplexMatrix::Identity(dout, dout);
  a.model->maximize_real_inner_product(minus_id, a.model->var(pv));
  a.model->add_objective_inner_product(minus_id, a.model->var(nv));

  DistillationResult r;
  sdp::SdpSolution s = sdp::solve(a.prob, p.solve_options);
  r.status = s.status;
  r.iterations = s.iterations;
  r.message = s.message;
  if (s.status != sdp::SolveStatus::optimal) return r;

  r.value = std::max(0.0, -s.primal_objective);
  r.certificate = sdp::verify_certificate(a.prob, s);
  // Lower bound on the optimal distance; the trace proxy uses the returned
  // blocks since P and N are not a priori trace-capped.
  double block_trace = 0.0;
  for (const auto& blk : s.blocks) block_trace += blk.trace();
  r.dual_bound = -r.certificate.dual_objective -
                 std::max(0.0, -r.certificate.min_dual_slack_eig) * (block_trace + 1.0);
  r.choi = rebuild_choi(a, s);
  attach_verdicts(p, r);
  return r;
}

OneShotRate one_shot_rate(const DensityOperator& state, double epsilon, OpClass op_class,
                          int m_max, const sdp::SolveOptions& opts) {
  if (!(epsilon > 0.0 && epsilon < 2.0))
    throw std::invalid_argument("one-shot rate: epsilon out of (0, 2)");
  if (m_max <= 0) m_max = state.layout().dim_of_side(Side::B);

  OneShotRate rate;
  for (int m = 1; m <= m_max; ++m) {
    DistillationProblem p{state, m, op_class, DistillObjective::trace_distance, opts};
    DistillationResult r = min_trace_distance_distillation(p);
    const double d = (r.status == sdp::SolveStatus::optimal)
                         ? r.value
                         : std::numeric_limits<double>::infinity();
    rate.scanned.emplace_back(m, d);
    if (d <= epsilon && m > rate.best_m) rate.best_m = m;
  }
  rate.log2_m = std::log2(static_cast<double>(rate.best_m));
  return rate;
}

double asymptotic_rate(const DensityOperator& state) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(state.matrix(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().maxCoeff() < 1.0 - 1e-8)
    throw std::invalid_argument("asymptotic rate: input state must be pure");
  const auto a_labels = state.layout().labels_of_side(Side::A);
  HermitianOperator marginal = partial_trace(state.op(), to_set(a_labels));
  const auto b_labels = marginal.layout().all_labels();
  DensityOperator dephased(dephase(marginal, to_set(b_labels)));
  return von_neumann_entropy(dephased);
}

double qi_relative_entropy_closed_form(const DensityOperator& state) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(state.matrix(), Eigen::EigenvaluesOnly);
  const bool pure = es.eigenvalues().maxCoeff() >= 1.0 - 1e-8;
  const bool has_a = !state.layout().labels_of_side(Side::A).empty();
  const bool has_b = !state.layout().labels_of_side(Side::B).empty();
  if (pure && has_a && has_b) return asymptotic_rate(state);

  // Maximally coherent state: all entries equal 1/M.
  const int m = state.dim();
  const double residual =
      (state.matrix() - ComplexMatrix::Constant(m, m, 1.0 / m)).cwiseAbs().maxCoeff();
  if (pure && residual <= 1e-8) return std::log2(static_cast<double>(m));

  throw std::invalid_argument(
      "qi relative entropy: closed form available only for pure bipartite states "
      "and maximally coherent states");
}

HierarchyReport hierarchy_demo(const HierarchyDemoOptions& opts) {
  HierarchyReport rep;
  rep.t = opts.t;
  rep.target_rank = opts.target_rank;

  // (a) Incoherent Kraus pair that copies A's basis value onto B. On the
  // product input |+>(x)|0> it outputs a maximally entangled state, so it
  // leaves the QI set while staying maximally incoherent.
  KrausChannel copier = make_basis_copy(2);
  rep.copier_io = is_io_kraus(copier);
  rep.copier_mio = is_mio(copier, opts.tol);
  rep.copier_qip = is_qip(copier, opts.tol);
  {
    ComplexVector plus0(4);
    plus0 << 1, 0, 1, 0;  // |+> (x) |0>
    DensityOperator in = pure_state(copier.input_layout(), plus0);
    ComplexVector bell(4);
    bell << 1, 0, 0, 1;
    DensityOperator target = pure_state(copier.output_layout(), bell);
    rep.copier_bell_fidelity = fidelity_squared(apply(copier, in), target);
  }

  // (b) Replacing A with |+> preserves QI states but not incoherent ones.
  {
    SystemLayout a1 = make_layout({{"A", 2, Side::A}});
    ComplexVector plus(2);
    plus << 1, 1;
    KrausChannel prep = make_tensor(make_state_replacement(a1, a1, plus),
                                    make_identity(make_layout({{"B", 2, Side::B}})));
    rep.prep_qip = is_qip(prep, opts.tol);
    rep.prep_mio = is_mio(prep, opts.tol);
  }

  // (c) SWAP: maximally incoherent, not PPT.
  {
    KrausChannel swap = make_swap(2);
    rep.swap_mio = is_mio(swap, opts.tol);
    rep.swap_ppt = is_ppt(swap);
    rep.swap_pt_min_eig = rep.swap_ppt.witness ? rep.swap_ppt.witness->value : 0.0;
  }

  // (d) Optimal fidelity with and without the PPT restriction.
  DensityOperator psi = build_example_state(opts.t);
  DistillationProblem base{psi, opts.target_rank, OpClass::qip, DistillObjective::fidelity,
                           opts.solve_options};
  rep.unrestricted = max_fidelity_distillation(base);
  base.op_class = OpClass::qip_ppt;
  rep.ppt_restricted = max_fidelity_distillation(base);

  rep.all_pass =
      rep.copier_io.member && rep.copier_mio.member && !rep.copier_qip.member &&
      rep.copier_bell_fidelity >= 1.0 - 1e-10 && rep.prep_qip.member && !rep.prep_mio.member &&
      rep.swap_mio.member && !rep.swap_ppt.member && rep.swap_pt_min_eig < -0.1 &&
      rep.unrestricted.status == sdp::SolveStatus::optimal &&
      rep.ppt_restricted.status == sdp::SolveStatus::optimal &&
      rep.unrestricted.value >= 0.9999 && rep.unrestricted.certificate.pass &&
      rep.ppt_restricted.value < 0.98 && rep.ppt_restricted.dual_bound < 0.98 &&
      rep.ppt_restricted.certificate.pass;
  return rep;
}

}  // namespace qihier
