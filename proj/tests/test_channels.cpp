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

#include "qihier/classes.hpp"
#include "testutil.hpp"

using namespace qihier;
namespace tu = qihier::testutil;

namespace {

// One-way protocol: A measures {|+><+|, |-><-|}, B applies 1 or Z. The same
// channel also has a purely incoherent (but nonlocal) Kraus pair.
KrausChannel plus_minus_correction_as_local() {
  SystemLayout la = make_layout({{"A", 2, Side::A}});
  SystemLayout lb = make_layout({{"B", 2, Side::B}});
  ComplexMatrix plus(2, 2), minus(2, 2), zgate(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  minus << 0.5, -0.5, -0.5, 0.5;
  zgate << 1, 0, 0, -1;
  Instrument instr(la, la, {{plus}, {minus}});
  std::vector<KrausChannel> conditional{make_identity(lb), make_unitary(lb, lb, zgate)};
  return make_one_way_lqicc(instr, conditional);
}

KrausChannel plus_minus_correction_as_incoherent() {
  const double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix k0 = ComplexMatrix::Zero(4, 4), k1 = ComplexMatrix::Zero(4, 4);
  // (1 (x) |0><0| + X (x) |1><1|) / sqrt(2) and the X-shifted partner.
  k0(0, 0) = k0(2, 2) = s;  // 1 (x) |0><0|
  k0(3, 1) = k0(1, 3) = s;  // X (x) |1><1|
  k1(2, 0) = k1(0, 2) = s;  // X (x) |0><0|
  k1(1, 1) = k1(3, 3) = s;  // 1 (x) |1><1|
  return KrausChannel(tu::qubit_pair(), tu::qubit_pair(), {k0, k1});
}

DensityOperator plus_otimes_zero() {
  ComplexVector v(4);
  v << 1, 0, 1, 0;
  return pure_state(tu::qubit_pair(), v);
}

}  // namespace

TEST_CASE("kraus channel validation") {
  CHECK_THROWS_AS(KrausChannel(tu::qubit_pair(), tu::qubit_pair(), {}), std::invalid_argument);
  ComplexMatrix half = 0.5 * ComplexMatrix::Identity(4, 4);
  CHECK_THROWS_AS(KrausChannel(tu::qubit_pair(), tu::qubit_pair(), {half}),
                  std::invalid_argument);
}

TEST_CASE("choi of the identity is the unnormalized maximally entangled state") {
  SystemLayout lb = make_layout({{"B", 2, Side::B}});
  ChoiOperator j = choi_from_kraus(make_identity(lb));
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect(0, 0) = expect(0, 3) = expect(3, 0) = expect(3, 3) = 1.0;  // sum_ij |ii><jj|
  CHECK((j.matrix().matrix() - expect).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(j.matrix().trace() == doctest::Approx(2));
  EigenSystem es = eig_hermitian(j.matrix());
  CHECK(es.eigenvalues(0) == doctest::Approx(2));
  CHECK(es.eigenvalues(1) == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("choi of the dephasing qubit channel is diag(1,0,0,1)") {
  SystemLayout lb = make_layout({{"B", 2, Side::B}});
  ChoiOperator j = choi_from_kraus(make_dephasing(lb));
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect(0, 0) = expect(3, 3) = 1.0;
  CHECK((j.matrix().matrix() - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("kraus_from_choi recovers rank and channel") {
  SystemLayout lb = make_layout({{"B", 2, Side::B}});
  KrausChannel id = make_identity(lb);
  KrausChannel back = kraus_from_choi(choi_from_kraus(id));
  CHECK(back.kraus().size() == 1);
  CHECK(channels_equal(back, id));

  KrausChannel deph = make_dephasing(lb);
  KrausChannel back2 = kraus_from_choi(choi_from_kraus(deph));
  CHECK(back2.kraus().size() == 2);
  CHECK(channels_equal(back2, deph));
}

TEST_CASE("choi round trip on random channels") {
  std::mt19937_64 rng(43);
  int checked = 0;
  for (int da : {2, 3, 4}) {
    for (int db : {2, 3, 4}) {
      SystemLayout lay = make_layout({{"A", da, Side::A}, {"B", db, Side::B}});
      const int runs = (da == 2 && db == 2) ? 20 : 10;
      for (int seed = 0; seed < runs; ++seed, ++checked) {
        KrausChannel ch = tu::random_channel(lay, lay, 3, rng);
        KrausChannel back = kraus_from_choi(choi_from_kraus(ch));
        CHECK(channels_equal(back, ch));
      }
    }
  }
  CHECK(checked == 100);
}

TEST_CASE("apply: the incoherent copier entangles |+>(x)|0>") {
  KrausChannel copier = make_basis_copy(2);
  DensityOperator out = apply(copier, plus_otimes_zero());
  ComplexVector bell(4);
  bell << 1, 0, 0, 1;
  DensityOperator target = pure_state(tu::qubit_pair(), bell);
  CHECK(fidelity_squared(out, target) == doctest::Approx(1).epsilon(1e-12));
}

TEST_CASE("apply basics and kraus/choi agreement") {
  SystemLayout lb = make_layout({{"B", 2, Side::B}});
  DensityOperator plus = pure_state(lb, (ComplexVector(2) << 1, 1).finished());
  CHECK((apply(make_identity(lb), plus).matrix() - plus.matrix()).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK((apply(make_dephasing(lb), plus).matrix() - 0.5 * ComplexMatrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  std::mt19937_64 rng(47);
  for (int seed = 0; seed < 20; ++seed) {
    KrausChannel ch = tu::random_channel(tu::qubit_pair(), lb, 2, rng);
    DensityOperator rho = tu::random_density(tu::qubit_pair(), rng);
    ComplexMatrix via_kraus = apply(ch, rho).matrix();
    ComplexMatrix via_choi = apply(choi_from_kraus(ch), rho).matrix();
    CHECK((via_kraus - via_choi).cwiseAbs().maxCoeff() < 1e-8);
  }

  CHECK_THROWS_AS(apply(make_identity(lb), plus_otimes_zero()), std::invalid_argument);
}

TEST_CASE("compose matches sequential application") {
  SystemLayout lb = make_layout({{"B", 2, Side::B}});
  ChoiOperator id = choi_from_kraus(make_identity(lb));
  ChoiOperator deph = choi_from_kraus(make_dephasing(lb));
  CHECK(channels_equal(compose(id, deph), deph));
  CHECK(channels_equal(compose(deph, deph), deph));

  std::mt19937_64 rng(53);
  for (int seed = 0; seed < 10; ++seed) {
    KrausChannel f = tu::random_channel(lb, lb, 2, rng);
    KrausChannel g = tu::random_channel(lb, lb, 2, rng);
    ChoiOperator fg = compose(choi_from_kraus(f), choi_from_kraus(g));
    DensityOperator rho = tu::random_density(lb, rng);
    ComplexMatrix direct = apply(f, apply(g, rho)).matrix();
    ComplexMatrix via_compose = apply(fg, rho).matrix();
    CHECK((direct - via_compose).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("the one-way protocol equals its incoherent Kraus form") {
  KrausChannel local = plus_minus_correction_as_local();
  KrausChannel incoherent = plus_minus_correction_as_incoherent();
  CHECK(channels_equal(local, incoherent));
  CHECK(is_io_kraus(incoherent).member);
  CHECK_FALSE(is_io_kraus(local).member);  // this decomposition is not incoherent
}

TEST_CASE("channels_equal distinguishes identity from swap") {
  KrausChannel swap = make_swap(2);
  KrausChannel id = make_identity(swap.input_layout());
  CHECK_FALSE(channels_equal(id, swap));
}

TEST_CASE("channels_equal is invariant under unitary remixing of Kraus lists") {
  std::mt19937_64 rng(59);
  for (int seed = 0; seed < 10; ++seed) {
    KrausChannel ch = tu::random_channel(tu::qubit_pair(), tu::qubit_pair(), 3, rng);
    ComplexMatrix u = tu::random_unitary(3, rng);
    std::vector<ComplexMatrix> remixed(3, ComplexMatrix::Zero(4, 4));
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) remixed[j] += u(i, j) * ch.kraus()[i];
    KrausChannel other(ch.input_layout(), ch.output_layout(), remixed);
    CHECK(channels_equal(ch, other));
  }
}

TEST_CASE("swap moves basis states and squares to the identity") {
  KrausChannel swap = make_swap(2);
  ComplexVector v01(4);
  v01 << 0, 1, 0, 0;  // |0>(x)|1>
  DensityOperator out = apply(swap, pure_state(swap.input_layout(), v01));
  CHECK(out.matrix()(2, 2).real() == doctest::Approx(1));  // |1>(x)|0>

  ChoiOperator j = choi_from_kraus(swap);
  CHECK(channels_equal(compose(j, j), choi_from_kraus(make_identity(swap.input_layout()))));

  // Its Choi partial transpose over the A factors dips below zero.
  HermitianOperator pt =
      partial_transpose(j.matrix(), tu::to_set(j.matrix().layout().labels_of_side(Side::A)));
  EigenSystem es = eig_hermitian(pt);
  CHECK(es.eigenvalues(es.eigenvalues.size() - 1) < -0.1);
}

TEST_CASE("one-way lqicc constructor validates and stays trace preserving") {
  std::mt19937_64 rng(61);
  SystemLayout la = make_layout({{"A", 2, Side::A}});
  SystemLayout lb = make_layout({{"B", 2, Side::B}});

  // Trivial instrument, incoherent conditional.
  Instrument trivial(la, la, {{ComplexMatrix::Identity(2, 2)}});
  KrausChannel ch = make_one_way_lqicc(trivial, {make_dephasing(lb)});
  CHECK(channels_equal(ch, make_tensor(make_identity(la), make_dephasing(lb))));

  // Random instruments with permutation-style conditionals are TP by
  // construction; KrausChannel would throw otherwise.
  for (int seed = 0; seed < 10; ++seed) {
    Instrument instr = tu::random_measurement_instrument(la, rng);
    std::vector<KrausChannel> conditional;
    for (std::size_t i = 0; i < instr.branches().size(); ++i)
      conditional.push_back(tu::random_io_channel(lb, 2, rng));
    CHECK_NOTHROW(make_one_way_lqicc(instr, conditional));
  }

  // Branch count mismatch and non-incoherent conditionals are rejected.
  Instrument instr = tu::random_measurement_instrument(la, rng);
  CHECK_THROWS_AS(make_one_way_lqicc(instr, {make_identity(lb)}), std::invalid_argument);
  ComplexMatrix had(2, 2);
  had << 1, 1, 1, -1;
  had /= std::sqrt(2.0);
  KrausChannel hadamard = make_unitary(lb, lb, had);
  CHECK_THROWS_AS(make_one_way_lqicc(instr, {hadamard, hadamard}), std::invalid_argument);
}

TEST_CASE("every one-way lqicc construction is QI preserving") {
  std::mt19937_64 rng(67);
  for (int seed = 0; seed < 30; ++seed) {
    KrausChannel ch = tu::random_one_way_lqicc(2, 2, rng);
    CHECK(is_qip(ch).member);
  }
}

TEST_CASE("sep constructor accepts complete product pairs and reports deviations") {
  std::mt19937_64 rng(71);
  SystemLayout la = make_layout({{"A", 2, Side::A}});
  SystemLayout lb = make_layout({{"B", 2, Side::B}});

  ComplexMatrix u = tu::random_unitary(2, rng), v = tu::random_unitary(2, rng);
  KrausChannel uv = make_sep_from_product_kraus(la, lb, {{u, v}});
  CHECK(channels_equal(uv, make_unitary(tu::qubit_pair(), tu::qubit_pair(), kron(u, v))));

  // The plus/minus correction protocol is separable.
  ComplexMatrix plus(2, 2), minus(2, 2), zgate(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  minus << 0.5, -0.5, -0.5, 0.5;
  zgate << 1, 0, 0, -1;
  KrausChannel sep = make_sep_from_product_kraus(
      la, lb, {{plus, ComplexMatrix::Identity(2, 2)}, {minus, zgate}});
  CHECK(channels_equal(sep, plus_minus_correction_as_local()));

  try {
    make_sep_from_product_kraus(la, lb, {{plus, zgate}});
    FAIL("expected completeness failure");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("completeness") != std::string::npos);
  }
}

TEST_CASE("is_io_kraus column rule") {
  SystemLayout lb = make_layout({{"B", 2, Side::B}});
  CHECK(is_io_kraus(make_identity(lb)).member);

  ComplexMatrix had(2, 2);
  had << 1, 1, 1, -1;
  had /= std::sqrt(2.0);
  MembershipVerdict v = is_io_kraus(make_unitary(lb, lb, had));
  CHECK_FALSE(v.member);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->probe == "kraus 0, column 0");

  CHECK(is_io_kraus(make_basis_copy(2)).member);
}

TEST_CASE("is_io_kraus ignores column phase scaling") {
  std::mt19937_64 rng(73);
  SystemLayout lb = make_layout({{"B", 3, Side::B}});
  for (int seed = 0; seed < 10; ++seed) {
    KrausChannel io = tu::random_io_channel(lb, 2, rng);
    std::uniform_real_distribution<double> angle(0, 2 * M_PI);
    std::vector<ComplexMatrix> scaled = io.kraus();
    for (auto& k : scaled)
      for (int col = 0; col < 3; ++col) k.col(col) *= std::polar(1.0, angle(rng));
    CHECK(is_io_kraus(KrausChannel(lb, lb, scaled)).member ==
          is_io_kraus(io).member);
  }
}

TEST_CASE("composition preserves ppt and qip membership") {
  std::mt19937_64 rng(79);
  SystemLayout la = make_layout({{"A", 2, Side::A}});
  SystemLayout lb = make_layout({{"B", 2, Side::B}});
  for (int seed = 0; seed < 6; ++seed) {
    // Product-Kraus channels are separable, hence PPT; their composition
    // must stay PPT.
    auto make_random_sep = [&] {
      std::vector<std::pair<ComplexMatrix, ComplexMatrix>> pairs;
      KrausChannel ka = tu::random_channel(la, la, 2, rng);
      KrausChannel kb = tu::random_channel(lb, lb, 2, rng);
      for (const auto& m : ka.kraus())
        for (const auto& k : kb.kraus()) pairs.push_back({m, k});
      return make_sep_from_product_kraus(la, lb, pairs);
    };
    ChoiOperator f = choi_from_kraus(make_random_sep());
    ChoiOperator g = choi_from_kraus(make_random_sep());
    CHECK(is_ppt(f).member);
    CHECK(is_ppt(g).member);
    CHECK(is_ppt(compose(f, g)).member);

    ChoiOperator qf = choi_from_kraus(tu::random_one_way_lqicc(2, 2, rng));
    ChoiOperator qg = choi_from_kraus(tu::random_one_way_lqicc(2, 2, rng));
    CHECK(is_qip(compose(qf, qg)).member);
  }
}

TEST_CASE("instrument validation") {
  SystemLayout la = make_layout({{"A", 2, Side::A}});
  ComplexMatrix half = std::sqrt(0.5) * ComplexMatrix::Identity(2, 2);
  CHECK_NOTHROW(Instrument(la, la, {{half}, {half}}));
  CHECK_THROWS_AS(Instrument(la, la, {{half}}), std::invalid_argument);
  CHECK_THROWS_AS(Instrument(la, la, {{ComplexMatrix::Identity(2, 2)},
                                      {ComplexMatrix::Identity(2, 2)}}),
                  std::invalid_argument);
}
