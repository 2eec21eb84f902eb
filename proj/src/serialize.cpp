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

#include "qihier/serialize.hpp"

namespace qihier {

Json layout_to_json(const SystemLayout& layout) {
  Json arr = Json::array();
  for (const auto& f : layout.factors())
    arr.push_back({{"label", f.label}, {"dim", f.dim}, {"side", std::string(1, side_char(f.side))}});
  return arr;
}

SystemLayout layout_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("layout: expected a non-empty array of factors");
  std::vector<Factor> fs;
  for (const auto& e : j) {
    Factor f;
    f.label = e.at("label").get<std::string>();
    f.dim = e.at("dim").get<int>();
    const std::string side = e.at("side").get<std::string>();
    if (side == "A")
      f.side = Side::A;
    else if (side == "B")
      f.side = Side::B;
    else
      throw std::invalid_argument("layout: side must be 'A' or 'B', got '" + side + "'");
    fs.push_back(std::move(f));
  }
  return SystemLayout(std::move(fs));
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json arr = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      arr.push_back({m(r, c).real(), m(r, c).imag()});
  return arr;
}

ComplexMatrix matrix_from_json(const Json& j, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows * cols)
    throw std::invalid_argument("matrix: expected " + std::to_string(rows * cols) +
                                " [re, im] pairs, got " + std::to_string(j.size()));
  ComplexMatrix m(rows, cols);
  int idx = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c, ++idx) {
      const Json& e = j.at(idx);
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("matrix: entry " + std::to_string(idx) +
                                    " is not a [re, im] pair");
      m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  return m;
}

Json channel_to_json(const KrausChannel& ch) {
  Json data = Json::array();
  for (const auto& k : ch.kraus()) data.push_back(matrix_to_json(k));
  return {{"kind", "kraus"},
          {"dims_in", layout_to_json(ch.input_layout())},
          {"dims_out", layout_to_json(ch.output_layout())},
          {"data", data}};
}

Json channel_to_json(const ChoiOperator& ch) {
  return {{"kind", "choi"},
          {"dims_in", layout_to_json(ch.input_layout())},
          {"dims_out", layout_to_json(ch.output_layout())},
          {"data", Json::array({matrix_to_json(ch.matrix().matrix())})}};
}

std::variant<KrausChannel, ChoiOperator> channel_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  SystemLayout in = layout_from_json(j.at("dims_in"));
  SystemLayout out = layout_from_json(j.at("dims_out"));
  const Json& data = j.at("data");
  if (!data.is_array() || data.empty())
    throw std::invalid_argument("channel: 'data' must be a non-empty array of matrices");
  if (kind == "kraus") {
    std::vector<ComplexMatrix> kraus;
    for (const auto& m : data) kraus.push_back(matrix_from_json(m, out.dim(), in.dim()));
    return KrausChannel(std::move(in), std::move(out), std::move(kraus));
  }
  if (kind == "choi") {
    if (data.size() != 1)
      throw std::invalid_argument("channel: choi files carry exactly one matrix");
    const int d = out.dim() * in.dim();
    ComplexMatrix m = matrix_from_json(data.at(0), d, d);
    // Same layout construction as choi_from_kraus: output factors first.
    std::vector<Factor> fs = out.factors();
    for (Factor f : in.factors()) {
      if (out.has_label(f.label)) f.label += "_in";
      fs.push_back(f);
    }
    return ChoiOperator(in, out, HermitianOperator(SystemLayout(std::move(fs)), std::move(m)));
  }
  throw std::invalid_argument("channel: kind must be 'kraus' or 'choi', got '" + kind + "'");
}

Json state_to_json(const DensityOperator& rho) {
  return {{"dims", layout_to_json(rho.layout())},
          {"data", Json::array({matrix_to_json(rho.matrix())})}};
}

DensityOperator state_from_json(const Json& j) {
  SystemLayout lay = layout_from_json(j.at("dims"));
  const Json& data = j.at("data");
  if (!data.is_array() || data.size() != 1)
    throw std::invalid_argument("state: 'data' must hold exactly one matrix");
  ComplexMatrix m = matrix_from_json(data.at(0), lay.dim(), lay.dim());
  return DensityOperator(std::move(lay), std::move(m));
}

Json verdict_to_json(const MembershipVerdict& v) {
  Json j = {{"class", v.class_name}, {"member", v.member}, {"tolerance", v.tolerance}};
  if (v.witness)
    j["witness"] = {{"probe", v.witness->probe}, {"value", v.witness->value}};
  return j;
}

Json certificate_to_json(const sdp::CertificateReport& rep) {
  Json checks = Json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"pass", c.pass}});
  return {{"pass", rep.pass},
          {"primal_objective", rep.primal_objective},
          {"dual_objective", rep.dual_objective},
          {"min_dual_slack_eig", rep.min_dual_slack_eig},
          {"checks", checks}};
}

Json distillation_result_to_json(const DistillationResult& r) {
  Json j = {{"status", sdp::to_string(r.status)},
            {"value", r.value},
            {"dual_bound", r.dual_bound},
            {"iterations", r.iterations}};
  if (!r.message.empty()) j["message"] = r.message;
  if (r.status == sdp::SolveStatus::optimal) j["certificate"] = certificate_to_json(r.certificate);
  if (r.class_verdict) j["class_verdict"] = verdict_to_json(*r.class_verdict);
  if (r.ppt_verdict) j["ppt_verdict"] = verdict_to_json(*r.ppt_verdict);
  return j;
}

Json hierarchy_report_to_json(const HierarchyReport& rep) {
  return {{"incoherent_copier",
           {{"io", verdict_to_json(rep.copier_io)},
            {"mio", verdict_to_json(rep.copier_mio)},
            {"qip", verdict_to_json(rep.copier_qip)},
            {"bell_fidelity", rep.copier_bell_fidelity}}},
          {"plus_preparation",
           {{"qip", verdict_to_json(rep.prep_qip)}, {"mio", verdict_to_json(rep.prep_mio)}}},
          {"swap",
           {{"mio", verdict_to_json(rep.swap_mio)},
            {"ppt", verdict_to_json(rep.swap_ppt)},
            {"pt_min_eigenvalue", rep.swap_pt_min_eig}}},
          {"distillation",
           {{"t", rep.t},
            {"target_rank", rep.target_rank},
            {"qip", distillation_result_to_json(rep.unrestricted)},
            {"qip_ppt", distillation_result_to_json(rep.ppt_restricted)}}},
          {"all_pass", rep.all_pass}};
}

}  // namespace qihier
