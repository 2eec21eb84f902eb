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

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qihier/serialize.hpp"
#include "testutil.hpp"

#ifndef QIHIER_CLI_PATH
#error "QIHIER_CLI_PATH must point at the built binary"
#endif

using namespace qihier;
namespace tu = qihier::testutil;

namespace {

struct CliRun {
  int exit_code = -1;
  std::string out;
};

std::string work_dir() {
  static std::string dir = [] {
    std::string d = "/tmp/qihier_cli_test_XXXXXX";
    REQUIRE(mkdtemp(d.data()) != nullptr);
    return d;
  }();
  return dir;
}

CliRun run_cli(const std::string& args) {
  const std::string out_path = work_dir() + "/stdout.txt";
  const std::string cmd =
      std::string(QIHIER_CLI_PATH) + " " + args + " > " + out_path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string write_file(const std::string& name, const std::string& contents) {
  const std::string path = work_dir() + "/" + name;
  std::ofstream out(path);
  out << contents;
  return path;
}

Json first_json_line(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty() && line.front() == '{') return Json::parse(line);
  FAIL("no json line in output: ", text);
  return {};
}

}  // namespace

TEST_CASE("classify: swap is mio but not ppt") {
  const std::string path =
      write_file("swap.json", channel_to_json(make_swap(2)).dump());
  CliRun r = run_cli("classify --channel " + path + " --classes mio,ppt");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("mio: true") != std::string::npos);
  CHECK(r.out.find("ppt: false") != std::string::npos);
}

TEST_CASE("classify: the incoherent copier across four classes") {
  const std::string path =
      write_file("copier.json", channel_to_json(make_basis_copy(2)).dump());
  CliRun r = run_cli("classify --channel " + path + " --classes io,mio,qip,cqip");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("io: true") != std::string::npos);
  CHECK(r.out.find("mio: true") != std::string::npos);
  CHECK(r.out.find("qip: false") != std::string::npos);
  CHECK(r.out.find("cqip: false") != std::string::npos);
}

TEST_CASE("classify: malformed files exit 2") {
  Json empty = channel_to_json(make_identity(tu::qubit_pair()));
  empty["data"] = Json::array();
  const std::string path = write_file("empty.json", empty.dump());
  CHECK(run_cli("classify --channel " + path).exit_code == 2);

  const std::string garbled = write_file("garbled.json", "{ not json");
  CHECK(run_cli("classify --channel " + garbled).exit_code == 2);

  CHECK(run_cli("classify --channel " + work_dir() + "/missing.json").exit_code == 2);
}

TEST_CASE("distill: out-of-range t exits 2") {
  CHECK(run_cli("distill --t 0.6 --target-rank 4 --class qip").exit_code == 2);
}

TEST_CASE("distill: state file runs reproduce bit for bit") {
  SystemLayout lb = make_layout({{"B", 2, Side::B}});
  DensityOperator plus(lb, maximally_coherent(2).matrix());
  const std::string path = write_file("plus.json", state_to_json(plus).dump());

  const std::string args =
      "distill --state " + path + " --target-rank 2 --class qip --objective fidelity";
  CliRun a = run_cli(args);
  CliRun b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);

  Json ja = first_json_line(a.out);
  Json jb = first_json_line(b.out);
  CHECK(ja.at("results").at("value").get<double>() == doctest::Approx(1).epsilon(1e-6));
  CHECK(ja.at("results") == jb.at("results"));
  CHECK(ja.at("parameters") == jb.at("parameters"));
}

TEST_CASE("distill: unknown class exits 2") {
  CHECK(run_cli("distill --t 0.25 --class locc").exit_code == 2);
}

TEST_CASE("sweep: bad ranges exit 2") {
  CHECK(run_cli("sweep --t-range 0.1:0.4:0").exit_code == 2);
  CHECK(run_cli("sweep --t-range 0.1:0.6:0.1").exit_code == 2);
  CHECK(run_cli("sweep --t-range 0.1:0.4").exit_code == 2);
}

TEST_CASE("sweep: class restriction is monotone row by row") {
  const std::string csv_free = work_dir() + "/sweep_free.csv";
  const std::string csv_ppt = work_dir() + "/sweep_ppt.csv";
  CliRun free = run_cli("sweep --t-range 0.15:0.35:0.1 --class qip --target-rank 2 --csv " +
                        csv_free);
  CliRun ppt = run_cli("sweep --t-range 0.15:0.35:0.1 --class qip-ppt --target-rank 2 --csv " +
                       csv_ppt);
  REQUIRE(free.exit_code == 0);
  REQUIRE(ppt.exit_code == 0);

  auto read_values = [](const std::string& path) {
    std::ifstream in(path);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "t,class,M,value,gap");
    std::vector<double> values;
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string field;
      for (int i = 0; i < 4; ++i) std::getline(ss, field, ',');
      values.push_back(std::stod(field));
    }
    return values;
  };
  std::vector<double> vf = read_values(csv_free);
  std::vector<double> vp = read_values(csv_ppt);
  REQUIRE(vf.size() == 3);
  REQUIRE(vp.size() == 3);
  for (std::size_t i = 0; i < vf.size(); ++i) {
    CHECK(vf[i] <= 1.0 + 1e-7);
    CHECK(vp[i] <= vf[i] + 2e-7);
  }
}

TEST_CASE("solve-sdp: round trip through a problem file") {
  sdp::SdpProblem p;
  const int blk = p.add_block("X", 2);
  p.objective.terms = {{blk, 0, 0, 1.0}, {blk, 1, 1, -1.0}};
  sdp::Constraint tr;
  tr.lhs.terms = {{blk, 0, 0, 1.0}, {blk, 1, 1, 1.0}};
  tr.rhs = 1.0;
  p.constraints.push_back(tr);
  std::stringstream ss;
  sdp::dump_problem(p, ss);
  const std::string path = write_file("problem.sdp", ss.str());

  CliRun r = run_cli("solve-sdp --problem " + path);
  REQUIRE(r.exit_code == 0);
  Json rep = first_json_line(r.out);
  CHECK(rep.at("results").at("primal_objective").get<double>() ==
        doctest::Approx(1).epsilon(1e-6));
  CHECK(rep.at("results").at("certificate").at("pass") == true);
}

TEST_CASE("solve-sdp: infeasible problems exit 1") {
  sdp::SdpProblem p;
  const int blk = p.add_block("X", 1);
  p.objective.terms = {{blk, 0, 0, 1.0}};
  p.constraints.push_back({{{{blk, 0, 0, 1.0}}}, -1.0, "neg"});
  std::stringstream ss;
  sdp::dump_problem(p, ss);
  const std::string path = write_file("infeasible.sdp", ss.str());
  CHECK(run_cli("solve-sdp --problem " + path).exit_code == 1);

  const std::string bad = write_file("bad.sdp", "not an sdp file");
  CHECK(run_cli("solve-sdp --problem " + bad).exit_code == 2);
}

TEST_CASE("env tolerance override lands in the report parameters") {
  const std::string path =
      write_file("swap_env.json", channel_to_json(make_swap(2)).dump());
  const std::string out_path = work_dir() + "/env_stdout.txt";
  const std::string cmd = std::string("QIHIER_TOL=1e-3 ") + QIHIER_CLI_PATH +
                          " classify --channel " + path + " --classes mio > " + out_path +
                          " 2>/dev/null";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  Json rep = first_json_line(ss.str());
  CHECK(rep.at("parameters").at("tol").get<double>() == doctest::Approx(1e-3));
}

TEST_CASE("hierarchy-demo exits 0 and stays 0 under a looser tolerance") {
  CliRun strict = run_cli("hierarchy-demo --json " + work_dir() + "/demo.json");
  REQUIRE(strict.exit_code == 0);
  Json rep = first_json_line(strict.out);
  CHECK(rep.at("results").at("all_pass") == true);
  CHECK(rep.at("results").at("distillation").at("qip").at("value").get<double>() >= 0.9999);
  CHECK(rep.at("results").at("distillation").at("qip_ppt").at("value").get<double>() < 0.98);

  CliRun loose = run_cli("hierarchy-demo --tol 1e-2");
  CHECK(loose.exit_code == 0);
  // The verdict tolerance does not steer the solver: the optimal values of
  // the two runs agree bit for bit.
  Json loose_rep = first_json_line(loose.out);
  CHECK(loose_rep.at("results").at("distillation").at("qip").at("value") ==
        rep.at("results").at("distillation").at("qip").at("value"));
  CHECK(loose_rep.at("results").at("distillation").at("qip_ppt").at("value") ==
        rep.at("results").at("distillation").at("qip_ppt").at("value"));
}
