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

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qihier/serialize.hpp"
#include "qihier/version.hpp"

namespace {

using namespace qihier;

constexpr int kExitOk = 0;
constexpr int kExitComputeFailure = 1;
constexpr int kExitBadInput = 2;

double default_tolerance() {
  if (const char* env = std::getenv("QIHIER_TOL")) {
    try {
      const double t = std::stod(env);
      if (t > 0) return t;
    } catch (...) {
    }
    std::cerr << "warning: ignoring unparsable QIHIER_TOL\n";
  }
  return tol::qi_default;
}

struct ReportSink {
  std::string command;
  Json parameters = Json::object();
  Json results = Json::object();
  std::string json_path;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  int emit(int exit_code) {
    Json report = {{"command", command},
                   {"parameters", parameters},
                   {"results", results},
                   {"exit_code", exit_code},
                   {"wall_time_s", std::chrono::duration<double>(
                                       std::chrono::steady_clock::now() - start)
                                       .count()},
                   {"version", kVersion}};
    std::cout << report.dump() << "\n";
    if (!json_path.empty()) {
      std::ofstream out(json_path);
      if (!out) {
        std::cerr << "error: cannot write report to " << json_path << "\n";
        return kExitBadInput;
      }
      out << report.dump() << "\n";
    }
    return exit_code;
  }
};

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file '" + path + "'");
  Json j;
  in >> j;
  return j;
}

DensityOperator load_input_state(double t, const std::string& state_path) {
  if (!state_path.empty()) return state_from_json(load_json_file(state_path));
  return build_example_state(t);
}

int cmd_distill(double t, const std::string& state_path, int target_rank,
                const std::string& cls, const std::string& objective, double tolerance,
                ReportSink& sink) {
  sink.parameters = {{"t", t},
                     {"state", state_path},
                     {"target_rank", target_rank},
                     {"class", cls},
                     {"objective", objective},
                     {"tol", tolerance}};
  if (objective != "trace" && objective != "fidelity")
    throw std::invalid_argument("objective must be 'fidelity' or 'trace'");
  DistillationProblem prob{load_input_state(t, state_path), target_rank,
                           op_class_from_string(cls),
                           objective == "trace" ? DistillObjective::trace_distance
                                                : DistillObjective::fidelity};

  DistillationResult r = prob.objective == DistillObjective::fidelity
                             ? max_fidelity_distillation(prob)
                             : min_trace_distance_distillation(prob);
  sink.results = distillation_result_to_json(r);
  if (r.status != sdp::SolveStatus::optimal) {
    std::cerr << "solver failed: " << sdp::to_string(r.status) << " " << r.message << "\n";
    return sink.emit(kExitComputeFailure);
  }
  return sink.emit(kExitOk);
}

int cmd_classify(const std::string& channel_path, const std::string& classes, double tolerance,
                 ReportSink& sink) {
  sink.parameters = {{"channel", channel_path}, {"classes", classes}, {"tol", tolerance}};
  auto parsed = channel_from_json(load_json_file(channel_path));

  Json verdicts = Json::array();
  std::stringstream ss(classes);
  std::string cls;
  while (std::getline(ss, cls, ',')) {
    MembershipVerdict v;
    if (cls == "io") {
      if (!std::holds_alternative<KrausChannel>(parsed))
        throw std::invalid_argument("classify io: needs a Kraus-form file (the verdict is "
                                    "decomposition-specific)");
      v = is_io_kraus(std::get<KrausChannel>(parsed));
    } else if (cls == "mio") {
      v = std::holds_alternative<KrausChannel>(parsed)
              ? is_mio(std::get<KrausChannel>(parsed), tolerance)
              : is_mio(std::get<ChoiOperator>(parsed), tolerance);
    } else if (cls == "ppt") {
      v = std::holds_alternative<KrausChannel>(parsed)
              ? is_ppt(std::get<KrausChannel>(parsed))
              : is_ppt(std::get<ChoiOperator>(parsed));
    } else if (cls == "qip") {
      v = std::holds_alternative<KrausChannel>(parsed)
              ? is_qip(std::get<KrausChannel>(parsed), tolerance)
              : is_qip(std::get<ChoiOperator>(parsed), tolerance);
    } else if (cls == "cqip") {
      const KrausChannel ch = std::holds_alternative<KrausChannel>(parsed)
                                  ? std::get<KrausChannel>(parsed)
                                  : kraus_from_choi(std::get<ChoiOperator>(parsed));
      v = is_cqip(ch, tolerance);
    } else {
      throw std::invalid_argument("unknown class '" + cls +
                                  "' (expected io, mio, ppt, qip, cqip)");
    }
    std::cout << cls << ": " << (v.member ? "true" : "false");
    if (v.witness) std::cout << "  [witness: " << v.witness->probe << "]";
    std::cout << "\n";
    verdicts.push_back(verdict_to_json(v));
  }
  sink.results = {{"verdicts", verdicts}};
  return sink.emit(kExitOk);
}

int cmd_hierarchy_demo(double tolerance, ReportSink& sink) {
  sink.parameters = {{"tol", tolerance}};
  HierarchyDemoOptions opts;
  opts.tol = tolerance;
  HierarchyReport rep = hierarchy_demo(opts);
  sink.results = hierarchy_report_to_json(rep);
  return sink.emit(rep.all_pass ? kExitOk : kExitComputeFailure);
}

int cmd_sweep(const std::string& range, const std::string& cls, int target_rank,
              const std::string& csv_path, ReportSink& sink) {
  sink.parameters = {{"t_range", range}, {"class", cls}, {"target_rank", target_rank},
                     {"csv", csv_path}};
  double lo = 0, hi = 0, step = 0;
  {
    std::stringstream ss(range);
    std::string tok;
    std::vector<double> parts;
    while (std::getline(ss, tok, ':')) parts.push_back(std::stod(tok));
    if (parts.size() != 3) throw std::invalid_argument("t-range must be 'start:end:step'");
    lo = parts[0];
    hi = parts[1];
    step = parts[2];
  }
  if (step <= 0) throw std::invalid_argument("t-range step must be positive");
  if (!(lo > 0 && hi < 0.5 && lo <= hi))
    throw std::invalid_argument("t-range must lie inside (0, 0.5)");

  OpClass op_class = op_class_from_string(cls);
  std::ostringstream csv;
  csv << "t,class,M,value,gap\n";
  Json rows = Json::array();
  bool solver_ok = true;
  for (double t = lo; t <= hi + 1e-12; t += step) {
    DistillationProblem prob{build_example_state(t), target_rank, op_class,
                             DistillObjective::fidelity};
    DistillationResult r = max_fidelity_distillation(prob);
    solver_ok = solver_ok && r.status == sdp::SolveStatus::optimal;
    const double gap = r.certificate.dual_objective - r.certificate.primal_objective;
    csv.precision(12);
    csv << t << "," << cls << "," << target_rank << "," << r.value << "," << gap << "\n";
    rows.push_back({{"t", t},
                    {"class", cls},
                    {"M", target_rank},
                    {"value", r.value},
                    {"gap", gap},
                    {"status", sdp::to_string(r.status)}});
  }
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw std::invalid_argument("cannot write csv to '" + csv_path + "'");
    out << csv.str();
  } else {
    std::cout << csv.str();
  }
  sink.results = {{"rows", rows}};
  return sink.emit(solver_ok ? kExitOk : kExitComputeFailure);
}

int cmd_solve_sdp(const std::string& problem_path, ReportSink& sink) {
  sink.parameters = {{"problem", problem_path}};
  std::ifstream in(problem_path);
  if (!in) throw std::invalid_argument("cannot open file '" + problem_path + "'");
  sdp::SdpProblem prob = sdp::parse_problem(in);
  sdp::SdpSolution sol = sdp::solve(prob);
  sink.results = {{"status", sdp::to_string(sol.status)},
                  {"primal_objective", sol.primal_objective},
                  {"dual_objective", sol.dual_objective},
                  {"gap", sol.gap},
                  {"iterations", sol.iterations}};
  if (sol.status == sdp::SolveStatus::optimal)
    sink.results["certificate"] = certificate_to_json(sdp::verify_certificate(prob, sol));
  if (!sol.message.empty()) sink.results["message"] = sol.message;
  return sink.emit(sol.status == sdp::SolveStatus::optimal ? kExitOk : kExitComputeFailure);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Choi-operator toolkit for coherence/entanglement operation classes"};
  app.require_subcommand(1);

  const double tol_default = default_tolerance();

  auto* distill = app.add_subcommand("distill", "Optimal assisted coherence distillation");
  double t = 0.25;
  std::string state_path, cls = "qip", objective = "fidelity", json_path;
  int target_rank = 4;
  double tolerance = tol_default;
  distill->add_option("--t", t, "Example-state parameter in (0, 0.5)");
  distill->add_option("--state", state_path, "State file (overrides --t)");
  distill->add_option("--target-rank", target_rank, "Coherence rank M of the target");
  distill->add_option("--class", cls, "Operation class: qip, qip-ppt, mio, mio-ppt");
  distill->add_option("--objective", objective, "fidelity or trace");
  distill->add_option("--tol", tolerance, "Verdict tolerance");
  distill->add_option("--json", json_path, "Write the run report to this path");

  auto* classify = app.add_subcommand("classify", "Channel-class membership verdicts");
  std::string channel_path, classes = "io,mio,ppt,qip,cqip";
  classify->add_option("--channel", channel_path, "Channel file (kraus or choi)")->required();
  classify->add_option("--classes", classes, "Comma-separated class list");
  classify->add_option("--tol", tolerance, "Verdict tolerance");
  classify->add_option("--json", json_path, "Write the run report to this path");

  auto* demo = app.add_subcommand("hierarchy-demo", "Run the operation-hierarchy separations");
  demo->add_option("--tol", tolerance, "Verdict tolerance");
  demo->add_option("--json", json_path, "Write the run report to this path");

  auto* sweep = app.add_subcommand("sweep", "Sweep the example-state family");
  std::string range = "0.1:0.4:0.1", csv_path;
  sweep->add_option("--t-range", range, "start:end:step inside (0, 0.5)");
  sweep->add_option("--class", cls, "Operation class");
  sweep->add_option("--target-rank", target_rank, "Coherence rank M of the target");
  sweep->add_option("--csv", csv_path, "Write rows to this CSV file");
  sweep->add_option("--json", json_path, "Write the run report to this path");

  auto* solve = app.add_subcommand("solve-sdp", "Solve a raw problem file");
  std::string problem_path;
  solve->add_option("--problem", problem_path, "Plain-text problem file")->required();
  solve->add_option("--json", json_path, "Write the run report to this path");

  CLI11_PARSE(app, argc, argv);

  ReportSink sink;
  sink.json_path = json_path;
  try {
    if (app.got_subcommand(distill)) {
      sink.command = "distill";
      return cmd_distill(t, state_path, target_rank, cls, objective, tolerance, sink);
    }
    if (app.got_subcommand(classify)) {
      sink.command = "classify";
      return cmd_classify(channel_path, classes, tolerance, sink);
    }
    if (app.got_subcommand(demo)) {
      sink.command = "hierarchy-demo";
      return cmd_hierarchy_demo(tolerance, sink);
    }
    if (app.got_subcommand(sweep)) {
      sink.command = "sweep";
      return cmd_sweep(range, cls, target_rank, csv_path, sink);
    }
    if (app.got_subcommand(solve)) {
      sink.command = "solve-sdp";
      return cmd_solve_sdp(problem_path, sink);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const Json::exception& e) {
    std::cerr << "error: malformed input file: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputeFailure;
  }
  return kExitBadInput;
}
