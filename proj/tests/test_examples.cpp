// Copyright 2026 The selftest Authors
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

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "selftest/chsh.hpp"
#include "selftest/clifford.hpp"
#include "selftest/dilation.hpp"
#include "selftest/errors.hpp"
#include "selftest/games.hpp"
#include "selftest/random.hpp"
#include "selftest/schur.hpp"
#include "support.hpp"

namespace selftest {
namespace {

const double kWin = 0.5 + 1.0 / (2.0 * std::sqrt(2.0));

// ---- chsh

TEST(Chsh, IdealModelValues) {
  const Model m = chsh_ideal_model();
  EXPECT_TRUE(validate(m).valid);
  const ChshScore s = chsh_score(correlation_ns(m));
  EXPECT_NEAR(s.winProb, kWin, 1e-12);
  EXPECT_NEAR(s.bias, 2 * std::sqrt(2.0), 1e-12);
  for (const auto& b : m.alice.blocks) EXPECT_NEAR(std::abs(b.trace()), 1.0, 1e-12);
  for (const auto& b : m.bob.blocks) EXPECT_NEAR(std::abs(b.trace()), 1.0, 1e-12);
}

TEST(Chsh, ScoreExamples) {
  NsCorrelation u = NsCorrelation::zeros(2, 2, 2, 2);
  for (auto& v : u.p) v = 0.25;
  EXPECT_NEAR(chsh_score(u).winProb, 0.5, 1e-15);
  EXPECT_NEAR(chsh_score(u).bias, 0.0, 1e-15);
  NsCorrelation d = NsCorrelation::zeros(2, 2, 2, 2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) d.at(x, y, 0, 0) = 1;
  EXPECT_NEAR(chsh_score(d).winProb, 0.75, 1e-15);
  EXPECT_NEAR(chsh_score(d).bias, 2.0, 1e-15);
  EXPECT_THROW(chsh_score(NsCorrelation::zeros(3, 2, 2, 2)), DimensionMismatch);
}

TEST(Chsh, OperatorRelations) {
  const ChshOperators op = build_operators(chsh_ideal_model());
  EXPECT_TRUE(op.certified);
  for (const auto& r : op.residuals) EXPECT_LE(r.value, 1e-12) << r.name;
  const ChshOperators amp = build_operators(ampliate(chsh_ideal_model(), 2, 2, max_entangled(2)));
  EXPECT_TRUE(amp.certified);
}

Model suboptimal_model() {
  Model m = chsh_ideal_model();
  m.bob.blocks[2] = m.bob.blocks[0];
  m.bob.blocks[3] = m.bob.blocks[1];
  return m;
}

TEST(Chsh, SuboptimalModel) {
  const ChshOperators op = build_operators(suboptimal_model());
  EXPECT_LT(op.bias, 2 * std::sqrt(2.0) - 0.1);
  EXPECT_FALSE(op.certified);
  EXPECT_FALSE(op.residuals.empty());
  EXPECT_THROW(swap_selftest(suboptimal_model()), NotOptimal);
  EXPECT_THROW(extract_pvm(suboptimal_model()), NotOptimal);
}

// Z_A X_A + X_A Z_A = A0^2 - A1^2 = 0 for any +-1 observables.
TEST(Chsh, AnticommutationIsAlgebraic) {
  Rng rng(30);
  for (int trial = 0; trial < 10; ++trial) {
    const Model m = Model::tensor(testing::random_pvm(2, 2, 3, rng), testing::random_pvm(2, 2, 2, rng),
                                  random_state(6, rng));
    const ChshOperators op = build_operators(m);
    EXPECT_LE((op.ZA * op.XA + op.XA * op.ZA).norm(), 1e-12);
  }
}

TEST(Chsh, SwapSelftestIdeal) {
  const SwapReport r = swap_selftest(chsh_ideal_model());
  EXPECT_TRUE(r.verdict);
  EXPECT_LE(r.dilation.maxResidual, 1e-10);
  EXPECT_NEAR(r.dilation.xiAux.norm(), 1.0, 1e-10);
  EXPECT_LE((r.dilation.xiAux - r.xiAux).norm(), 1e-10);
  // Oracle: the local isometries send the state to Omega_2 (x) xi_aux.
  const Model m = chsh_ideal_model();
  const CMatrix perm = factor_permutation({2, 2, 2, 2}, {0, 2, 1, 3});
  const CVector img = perm * kron(r.localA, r.localB) * m.state;
  EXPECT_LE((img - kron(max_entangled(2), r.xiAux)).norm(), 1e-12);
}

TEST(Chsh, SwapSelftestInvariance) {
  Rng rng(31);
  const Model ideal = chsh_ideal_model();
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index aa = 1 + rng.below(3), ab = 1 + rng.below(3);
    const Model amp = ampliate(ideal, aa, ab, random_state(aa * ab, rng));
    const Model m = testing::conjugate_local(amp, random_unitary(2 * aa, rng), random_unitary(2 * ab, rng));
    const SwapReport r = swap_selftest(m);
    EXPECT_TRUE(r.verdict) << trial;
    EXPECT_NEAR(r.dilation.xiAux.norm(), 1.0, 1e-9);
    EXPECT_TRUE(swap_selftest(to_commuting(m)).verdict);
  }
}

TEST(Chsh, ExtractPvm) {
  const Model ideal = chsh_ideal_model();
  const Model same = extract_pvm(ideal);
  for (std::size_t i = 0; i < ideal.alice.blocks.size(); ++i)
    EXPECT_LE((same.alice.blocks[i] - ideal.alice.blocks[i]).norm(), 1e-12);

  // P (+) blend on a state-orthogonal summand: C^2 (x) (C^2 (+) C^1) for Alice.
  MeasurementFamily a = ideal.alice;
  for (auto& b : a.blocks) {
    CMatrix big = CMatrix::Zero(3, 3);
    big.topLeftCorner(2, 2) = b;
    big(2, 2) = 0.5;
    b = big;
  }
  a.kind = FamilyKind::POVM;
  a.h = 3;
  CVector xi = CVector::Zero(6);
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 2; ++j) xi(i * 2 + j) = ideal.state(i * 2 + j);
  const Model m = Model::tensor(a, ideal.bob, xi);
  ASSERT_TRUE(validate(m).valid);
  const Model p = extract_pvm(m);
  EXPECT_EQ(p.alice.kind, FamilyKind::PVM);
  for (std::size_t i = 0; i < a.blocks.size(); ++i)
    EXPECT_LE((CMatrix(p.alice.blocks[i].topLeftCorner(2, 2)) - ideal.alice.blocks[i]).norm(), 1e-9);
  EXPECT_LE(max_abs_diff(correlation_ns(p), correlation_ns(ideal)), 1e-9);
}

TEST(Chsh, Counterexample) {
  const CounterexampleReport r = counterexample_som();
  EXPECT_TRUE(r.aliceValid);
  EXPECT_TRUE(r.bobValid);
  EXPECT_LE(validate(r.model.alice).magnitude, 1e-10);
  EXPECT_LE(r.qnsDiagonalResidual, 1e-10);
  EXPECT_GT(r.obstruction, 0.1);
  EXPECT_TRUE(r.verdict);
  // Oracle: recompute the off-diagonal mass at the reported worst index.
  const Model& m = r.model;
  const int x = r.worst[0], y = r.worst[1], a = r.worst[2], b = r.worst[3];
  const CMatrix op = kron(m.alice.som(x, x, a, 1 - a), m.bob.som(y, y, b, 1 - b));
  EXPECT_NEAR((op * m.state).norm(), r.obstruction, 1e-12);
  // The whole QNS correlation is the classical lift, so no correlation test can see the obstruction.
  EXPECT_LE(r.qnsResidual, 1e-10);
}

// ---- clifford

TEST(Clifford, RepExamples) {
  auto u = clifford_rep(2);
  ASSERT_EQ(u.size(), 2u);
  EXPECT_LE((u[0] - pauli_x()).norm(), 1e-15);
  EXPECT_LE((u[1] - pauli_z()).norm(), 1e-15);
  EXPECT_THROW(clifford_rep(3), Error);
  for (int n : {2, 4, 6}) {
    u = clifford_rep(n);
    const Eigen::Index d = Eigen::Index(1) << (n / 2);
    for (std::size_t x = 0; x < u.size(); ++x) {
      EXPECT_EQ(u[x].rows(), d);
      EXPECT_LE((u[x] * u[x] - identity(d)).norm(), 1e-13);
      EXPECT_LE(hermitian_residual(u[x]), 1e-14);
      for (std::size_t y = x + 1; y < u.size(); ++y) EXPECT_LE((u[x] * u[y] + u[y] * u[x]).norm(), 1e-13);
    }
  }
}

TEST(Clifford, QuotientRelation) {
  const CMatrix p = 0.5 * (identity(2) + pauli_x()), q = 0.5 * (identity(2) + pauli_z());
  EXPECT_LE(quotient_relation_check(p, q), 1e-14);
  // p = q: 8p - 4p - 4p + 2I = 2I.
  EXPECT_NEAR(quotient_relation_check(p, p), 2 * std::sqrt(2.0), 1e-12);
  EXPECT_GT(quotient_relation_check(kron(p, identity(2)), kron(identity(2), q)), 0.1);
  EXPECT_THROW(quotient_relation_check(2.0 * p, q), ValidationError);
}

TEST(Clifford, CorrelationExamples) {
  const NsCorrelation p = clifford_correlation(2);
  EXPECT_TRUE(p.synchronous);
  for (int x = 0; x < 2; ++x) {
    EXPECT_NEAR(p.at(x, x, 0, 1), 0.0, 1e-15);
    EXPECT_NEAR(p.at(x, x, 1, 0), 0.0, 1e-15);
  }
  EXPECT_NEAR(p.at(0, 1, 0, 0), 0.25, 1e-15);
  // State mode with Omega: tr(r_xa r_yb^T) / d.
  for (int n : {2, 4}) {
    const auto u = clifford_rep(n);
    const Eigen::Index d = u[0].rows();
    const NsCorrelation s = clifford_correlation(n, max_entangled(d));
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            const CMatrix ra = 0.5 * (identity(d) + (a ? -1.0 : 1.0) * u[std::size_t(x)]);
            const CMatrix rb = 0.5 * (identity(d) + (b ? -1.0 : 1.0) * u[std::size_t(y)]);
            EXPECT_NEAR(s.at(x, y, a, b), (ra * rb.transpose()).trace().real() / double(d), 1e-12);
          }
  }
  EXPECT_LE(max_abs_diff(clifford_correlation(4), correlation_ns(clifford_canonical_model(4))), 1e-12);
}

TEST(Clifford, Witness) {
  const WitnessKernel w = witness_kernel(2);
  EXPECT_EQ(w.kernel.cols(), 1);
  EXPECT_GE(w.minEigenvalue, -1e-12);
  const double want[] = {0, 2, 2, 4};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(w.eigenvalues(i), want[i], 1e-12);
  EXPECT_NEAR((w.kernel.adjoint() * max_entangled(2)).norm(), 1.0, 1e-12);
  EXPECT_EQ(witness_kernel(4).kernel.cols(), 1);
  for (int n : {2, 4, 6}) EXPECT_GE(witness_kernel(n).minEigenvalue, -1e-10);
}

TEST(Clifford, WordReduction) {
  const Word w{e_letter(0, 0), e_letter(0, 0), f_letter(1, 1), e_letter(1, 0)};
  const Word r = reduce(w);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_FALSE(r[0].bob);
  EXPECT_FALSE(r[1].bob);
  EXPECT_TRUE(r[2].bob);
  EXPECT_EQ(star(star(w)), w);
}

TEST(Clifford, MomentMatrices) {
  for (int n : {2, 4}) {
    const Model m = clifford_canonical_model(n);
    const auto words = level1_words(n, 2, n, 2);
    const MomentMatrix mm = moment_matrix(clifford_correlation(n), words, completion_from_model(m, words));
    EXPECT_TRUE(mm.psd) << mm.minEigenvalue;
    EXPECT_NEAR(std::abs(mm.at({}, {}) - 1.0), 0.0, 1e-15);
  }
  // Uniform classical table with product completion.
  const Model bits = independent_bits_model(2);
  const auto words = level1_words(2, 2, 2, 2);
  EXPECT_TRUE(moment_matrix(correlation_ns(bits), words, completion_from_model(bits, words)).psd);

  Completion bad{{{e_letter(0, 0), e_letter(0, 0)}, 0.9}};
  EXPECT_THROW(moment_matrix(clifford_correlation(2), level1_words(2, 2, 2, 2), bad), InconsistentCompletion);
}

TEST(Clifford, MomentMatrixOfModelIsPsd) {
  Rng rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const Model m = testing::random_tensor_model(2, 2, 2, 2, rng);
    const auto words = ac_words(2);
    const Model pm = Model::tensor(testing::random_pvm(2, 2, 2, rng), testing::random_pvm(2, 2, 2, rng),
                                   random_state(4, rng));
    for (const Model* x : {&m, &pm}) {
      const MomentMatrix mm = moment_matrix(correlation_ns(*x), words, completion_from_model(*x, words));
      EXPECT_GE(mm.minEigenvalue, -1e-10);
    }
  }
}

TEST(Clifford, AcConstraint) {
  for (int n : {2, 4}) {
    const AcReport r = ac_check(clifford_canonical_model(n));
    EXPECT_TRUE(r.verdict);
    EXPECT_EQ(r.pairs.size(), std::size_t(n * (n - 1) / 2));
    EXPECT_LE(r.maxResidual, 1e-12);
  }
  const Model m = clifford_canonical_model(2);
  const auto words = ac_words(2);
  const MomentMatrix mm = moment_matrix(correlation_ns(m), words, completion_from_model(m, words));
  const Word e0{e_letter(0, 0)}, e1{e_letter(1, 0)};
  EXPECT_NEAR(mm.at(e0, e1).real(), 0.25, 1e-12);
  EXPECT_NEAR(mm.at({e_letter(0, 0), e_letter(1, 0)}, {e_letter(1, 0), e_letter(0, 0)}).real(), 0.125, 1e-12);

  const AcReport bad = ac_check(independent_bits_model(2));
  EXPECT_FALSE(bad.verdict);
  EXPECT_NEAR(bad.maxResidual, 0.125, 1e-12);
}

// ---- games

TEST(Games, PauliModel) {
  const HomModel m = pauli_hom_model();
  EXPECT_TRUE(validate(m, 1e-14).valid);
  for (const auto& r : hom_relations(m)) EXPECT_LE(r.value, 1e-14) << r.name;
  const auto u = pauli_unitaries();
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y)
      EXPECT_NEAR(std::abs((u[x] * u[y].adjoint()).trace() / 2.0), x == y ? 1.0 : 0.0, 1e-15);
  EXPECT_LE(unitary_error_basis_residual(u), 1e-15);
  for (int a = 0; a < 2; ++a)
    for (int ap = 0; ap < 2; ++ap) {
      CMatrix e = CMatrix::Zero(2, 2);
      e(a, ap) = 1;
      EXPECT_LE((m.e(0, a, ap) - e).norm(), 1e-15);
    }
  HomModel bad = m;
  bad.trace *= 2.0;
  EXPECT_FALSE(validate(bad).valid);
  EXPECT_THROW(gamma_correlation(bad), ValidationError);
}

TEST(Games, GammaIsPerfect) {
  const CqnsCorrelation g = gamma_correlation(pauli_hom_model());
  const CVector omega = max_entangled(2);
  const CMatrix j = omega * omega.adjoint();
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      if (x == y) EXPECT_LE((g.block(x, y) - j).norm(), 1e-12);
      else EXPECT_NEAR(std::abs((g.block(x, y) * j).trace()), 0.0, 1e-12);
    }
  const PerfectReport r = verify_perfect(g);
  EXPECT_TRUE(r.verdict);
  for (const auto& x : r.residuals) EXPECT_LE(x.value, 1e-12);
}

TEST(Games, VerifyPerfectFailuresAndLinearity) {
  CqnsCorrelation id{4, 4, 2, 2, {}};
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      CMatrix b = CMatrix::Zero(4, 4);
      b(0, 0) = 1;  // deterministic outputs (0,0)
      id.blocks.push_back(b);
    }
  const PerfectReport bad = verify_perfect(id);
  EXPECT_FALSE(bad.verdict);
  const CqnsCorrelation g = gamma_correlation(pauli_hom_model());
  CqnsCorrelation mix = g;
  for (std::size_t i = 0; i < mix.blocks.size(); ++i) mix.blocks[i] = 0.5 * g.blocks[i] + 0.5 * id.blocks[i];
  const PerfectReport half = verify_perfect(mix);
  for (std::size_t i = 0; i < half.residuals.size(); ++i)
    EXPECT_NEAR(half.residuals[i].value, 0.5 * bad.residuals[i].value, 1e-12);
}

TEST(Games, ExtractPauliForm) {
  PauliForm f = extract_pauli_form(pauli_hom_model());
  EXPECT_TRUE(f.verdict);
  EXPECT_EQ(f.nDim, 1);
  EXPECT_LE(f.multimpResidual, 1e-12);
  EXPECT_NEAR(std::abs(f.v(0, 0)), 1.0, 1e-12);
  EXPECT_LE((f.v.cwiseAbs() - identity(2).cwiseAbs()).norm(), 1e-12);

  f = extract_pauli_form(ampliate(pauli_hom_model(), 3));
  EXPECT_TRUE(f.verdict);
  EXPECT_EQ(f.nDim, 3);
  EXPECT_LE(f.multimpResidual, 1e-8);
}

TEST(Games, ExtractPauliFormRandomized) {
  Rng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index k = 1 + rng.below(3);
    const HomModel m = conjugate(ampliate(pauli_hom_model(), k), random_unitary(2 * k, rng));
    const PauliForm f = extract_pauli_form(m, 1e-9, std::uint64_t(trial));
    EXPECT_TRUE(f.verdict) << trial;
    EXPECT_EQ(f.nDim, k);
    EXPECT_LE(f.multimpResidual, 1e-7);
    EXPECT_LE(f.traceResidual, 1e-8);
    // Oracle: recompute V e V^* = U_x^* eps U_x (x) I_k from the returned isometry.
    const auto u = pauli_unitaries();
    double worst = 0;
    for (int x = 0; x < 4; ++x)
      for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap) {
          CMatrix e = CMatrix::Zero(2, 2);
          e(a, ap) = 1;
          const CMatrix want = kron(CMatrix(u[std::size_t(x)].adjoint() * e * u[std::size_t(x)]), identity(k));
          worst = std::max(worst, (f.v * m.e(x, a, ap) * f.v.adjoint() - want).norm());
        }
    EXPECT_LE(worst, 1e-7);
  }
}

TEST(Games, ExtractRejectsNonFaithfulTrace) {
  HomModel m = ampliate(pauli_hom_model(), 2);
  m.trace = kron(identity(2), CMatrix(Eigen::Vector2cd(1, 0).asDiagonal())) / 2.0;
  EXPECT_THROW(extract_pauli_form(m), ValidationError);
}

TEST(Games, Scenarios) {
  const NsCorrelation p = correlation_ns(chsh_ideal_model());
  const Scenario b = bell_scenario(2, 2);
  const ScenarioReport bell = scenario_check(b, b, bell_assignment(p));
  EXPECT_TRUE(bell.verdict);
  EXPECT_EQ(bell.verdict, validate(p).valid);

  const Scenario g3 = odd_cycle_scenario(3);
  const std::vector<double> a(6, 1.0 / 3.0);
  const ScenarioReport r = scenario_check(g3, a);
  EXPECT_TRUE(r.verdict);
  for (double e : r.edgeResiduals) EXPECT_LE(e, 1e-15);

  // Vertex 0 lies in two edges, both of which now sum to 0.9.
  std::vector<double> off = a;
  off[0] -= 0.1;
  const ScenarioReport f = scenario_check(g3, off);
  EXPECT_FALSE(f.verdict);
  EXPECT_NEAR(f.normalizationResidual, 0.1, 1e-12);
  EXPECT_EQ(std::count_if(f.edgeResiduals.begin(), f.edgeResiduals.end(), [](double e) { return e > 0.05; }), 2);

  Scenario lonely{3, {{0, 1}}};
  EXPECT_THROW(require_valid(lonely), ValidationError);
}

TEST(Games, ProductScenario) {
  const NsCorrelation p = correlation_ns(chsh_ideal_model());
  const Scenario b = bell_scenario(2, 2);
  // Joint assignment on B (x) B indexed by (x,a) x (y,b) vertices.
  std::vector<double> joint(16);
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a)
      for (int y = 0; y < 2; ++y)
        for (int bb = 0; bb < 2; ++bb) joint[std::size_t((x * 2 + a) * 4 + y * 2 + bb)] = p.at(x, y, a, bb);
  const ScenarioReport r = scenario_check(b, b, joint);
  EXPECT_TRUE(r.verdict);
  EXPECT_LE(std::max(r.nsResidualA, r.nsResidualB), 1e-12);
  NsCorrelation sig = p;
  sig.at(0, 0, 0, 0) += 0.1;
  sig.at(0, 0, 1, 0) -= 0.1;
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a)
      for (int y = 0; y < 2; ++y)
        for (int bb = 0; bb < 2; ++bb) joint[std::size_t((x * 2 + a) * 4 + y * 2 + bb)] = sig.at(x, y, a, bb);
  EXPECT_FALSE(scenario_check(b, b, joint).verdict);
}

// ---- schur

// Independent permutation arithmetic for S3.
int compose(int s, int t) {
  static const std::array<std::array<int, 3>, 6> perms = {{
      {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}}};
  std::array<int, 3> c{};
  for (int i = 0; i < 3; ++i) c[std::size_t(i)] = perms[std::size_t(s)][std::size_t(perms[std::size_t(t)][std::size_t(i)])];
  return int(std::find(perms.begin(), perms.end(), c) - perms.begin());
}

TEST(Schur, S3Irrep) {
  const GroupRep r = s3_irrep();
  EXPECT_TRUE(validate(r, 1e-14).valid);
  const cplx w = std::polar(1.0, 2 * std::numbers::pi / 3);
  EXPECT_LE((r.mats[1] - CMatrix(Eigen::Vector2cd(w, std::conj(w)).asDiagonal())).norm(), 1e-15);
  for (int s = 0; s < 6; ++s)
    for (int t = 0; t < 6; ++t) {
      EXPECT_EQ(r.group.mul(s, t), compose(s, t));
      EXPECT_LE((r.mats[std::size_t(s)] * r.mats[std::size_t(t)] - r.mats[std::size_t(compose(s, t))]).norm(), 1e-14);
    }
  EXPECT_LE((r.mats[0] - identity(2)).norm(), 0.0);
  EXPECT_EQ(commutant_basis(r.mats, 2).size(), 1u);
}

TEST(Schur, GroupTableChecks) {
  EXPECT_THROW(FiniteGroup::from_table(2, {0, 1, 1, 1}), ValidationError);
  EXPECT_THROW(FiniteGroup::from_table(3, {0, 1, 2, 1, 2, 0, 2, 0, 0}), ValidationError);
  const FiniteGroup z3 = cyclic_group(3);
  EXPECT_EQ(z3.inv(1), 2);
}

TEST(Schur, RotatedPsi) {
  const CVector e = rotated_psi(0.7, 1.0, 0.0);
  RVector s = schmidt_coefficients(e, 2, 2);
  EXPECT_NEAR(s(1), 0.0, 1e-15);
  const CVector m = rotated_psi(0.3, 1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
  s = schmidt_coefficients(m, 2, 2);
  EXPECT_NEAR(s(0), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(s(1), 1 / std::sqrt(2.0), 1e-12);
  s = schmidt_coefficients(rotated_psi(std::numbers::pi / 3, 0.5, std::sqrt(0.75)), 2, 2);
  EXPECT_NEAR(s(0), std::sqrt(3.0) / 2, 1e-12);
  EXPECT_NEAR(s(1), 0.5, 1e-12);
  EXPECT_THROW(rotated_psi(0.1, 1.0, 1.0), ValidationError);
}

TEST(Schur, ChannelMaxEntangled) {
  const GroupRep r = s3_irrep();
  const SchurData d = schur_channel(r, r, max_entangled(2));
  for (int s = 0; s < 6; ++s)
    for (int t = 0; t < 6; ++t) {
      const cplx want = (r.mats[std::size_t(s)] * r.mats[std::size_t(t)].transpose()).trace() / 2.0;
      EXPECT_NEAR(std::abs(d.u(s, t) - want), 0.0, 1e-12);
    }
  EXPECT_TRUE(d.cptp);
  EXPECT_LE(d.unitalResidual, 1e-12);
  EXPECT_LE(d.tpResidual, 1e-12);
  EXPECT_GE(d.minEigenvalue, -1e-12);
}

TEST(Schur, TrivialRepsGiveIdentityChannel) {
  const FiniteGroup g = cyclic_group(3);
  const GroupRep t = trivial_rep(g);
  const SchurData d = schur_channel(t, t, basis_vector(1, 0));
  const CMatrix choi = schur_choi(d);
  // Choi of the identity channel on C^9: sum_ij e_ij (x) e_ij.
  CMatrix want = CMatrix::Zero(81, 81);
  for (Eigen::Index i = 0; i < 9; ++i)
    for (Eigen::Index j = 0; j < 9; ++j) want(i * 9 + i, j * 9 + j) = 1.0;
  EXPECT_LE((choi - want).norm(), 1e-15);
}

TEST(Schur, FullChoiSpectrumMatchesCompressed) {
  // Characters of Z3 on both sides with a generic state.
  const FiniteGroup g = cyclic_group(3);
  GroupRep chi{g, {}, 2};
  const cplx w = std::polar(1.0, 2 * std::numbers::pi / 3);
  for (int s = 0; s < 3; ++s) chi.mats.push_back(CMatrix(Eigen::Vector2cd(std::pow(w, s), std::pow(w, 2 * s)).asDiagonal()));
  Rng rng(34);
  const SchurData d = schur_channel(chi, chi, random_state(4, rng));
  const RVector full = herm_eigenvalues(schur_choi(d));
  EXPECT_NEAR(full(0), std::min(0.0, d.minEigenvalue), 1e-12);
  EXPECT_TRUE(d.cptp);
}

TEST(Schur, S3Example) {
  const GroupRep r = s3_irrep();
  const CVector psi = rotated_psi(std::numbers::pi / 3, 0.5, std::sqrt(0.75));
  const SchurData d = schur_channel(r, r, psi);
  EXPECT_TRUE(d.cptp);
  EXPECT_LE(d.tpResidual, 1e-12);
  EXPECT_GE(d.minEigenvalue, -1e-10);
  EXPECT_NEAR(std::abs(d.u(0, 0) - 1.0), 0.0, 1e-14);
  const Hypotheses h = selftest_hypotheses(r, r, psi);
  EXPECT_TRUE(h.marginallyCyclic);
  EXPECT_EQ(h.extremalityRank, 16);
  EXPECT_TRUE(h.verdict);
  EXPECT_FALSE(selftest_hypotheses(r, r, rotated_psi(0.4, 1.0, 0.0)).marginallyCyclic);
  const Hypotheses flat = selftest_hypotheses(r, r, rotated_psi(std::numbers::pi / 2, 0.5, std::sqrt(0.75)));
  EXPECT_LT(flat.extremalityRank, 16);
  EXPECT_FALSE(flat.verdict);
}

TEST(Schur, ChannelAlwaysCptp) {
  Rng rng(35);
  const GroupRep r = s3_irrep();
  for (int trial = 0; trial < 10; ++trial) {
    const SchurData d = schur_channel(r, r, random_state(4, rng));
    EXPECT_TRUE(d.cptp);
    EXPECT_GE(d.minEigenvalue, -1e-10);
    EXPECT_LE(std::max(d.unitalResidual, d.tpResidual), 1e-10);
  }
}

TEST(Schur, HypothesesInvariantUnderPhaseAndRelabeling) {
  Rng rng(36);
  const GroupRep r = s3_irrep();
  for (int trial = 0; trial < 10; ++trial) {
    const double theta = 0.2 + 1.2 * rng.uniform();
    const double a2 = 0.05 + 0.4 * rng.uniform();
    const CVector psi = rotated_psi(theta, std::sqrt(a2), std::sqrt(1 - a2));
    const Hypotheses base = selftest_hypotheses(r, r, psi);
    const Hypotheses phased = selftest_hypotheses(r, r, std::polar(1.0, 6.0 * rng.uniform()) * psi);
    std::vector<int> perm{0, 1, 2, 3, 4, 5};
    for (int i = 5; i > 0; --i) std::swap(perm[std::size_t(i)], perm[std::size_t(rng.below(i + 1))]);
    const GroupRep rr = relabel(r, perm);
    const Hypotheses relabeled = selftest_hypotheses(rr, rr, psi);
    for (const Hypotheses* h : {&phased, &relabeled}) {
      EXPECT_EQ(h->verdict, base.verdict);
      EXPECT_EQ(h->extremalityRank, base.extremalityRank);
      EXPECT_EQ(h->marginallyCyclic, base.marginallyCyclic);
    }
  }
}

TEST(Schur, UsomModel) {
  const GroupRep r = s3_irrep();
  const CVector psi = rotated_psi(std::numbers::pi / 3, 0.5, std::sqrt(0.75));
  const Model m = usom_model(r, r, psi);
  EXPECT_LE(validate(m.alice).magnitude, 1e-12);
  EXPECT_EQ(m.alice.kind, FamilyKind::USOM);
  const SchurData d = schur_channel(r, r, psi);
  const QnsCorrelation g = correlation_qns(m);
  const FiniteGroup& G = r.group;
  double worst = 0;
  for (int s = 0; s < 6; ++s)
    for (int sp = 0; sp < 6; ++sp)
      for (int t = 0; t < 6; ++t)
        for (int tp = 0; tp < 6; ++tp)
          worst = std::max(worst, std::abs(g.entry(s, sp, t, tp, s, sp, t, tp) -
                                           d.u(G.mul(G.inv(s), sp), G.mul(G.inv(t), tp))));
  EXPECT_LE(worst, 1e-12);

  const GroupRep one = trivial_rep(cyclic_group(1));
  const Model id = usom_model(one, one, basis_vector(1, 0));
  ASSERT_EQ(id.alice.blocks.size(), 1u);
  EXPECT_LE((id.alice.blocks[0] - identity(1)).norm(), 0.0);
}

TEST(Schur, DilationOfIdealModel) {
  const GroupRep r = s3_irrep();
  const CVector psi = rotated_psi(std::numbers::pi / 3, 0.5, std::sqrt(0.75));
  const SchurDilation d = schur_dilation(usom_model(r, r, psi), r, r, psi);
  EXPECT_TRUE(d.verdict);
  EXPECT_EQ(d.report.xiAux.size(), 1);
  EXPECT_NEAR(std::abs(d.report.xiAux(0)), 1.0, 1e-10);
}

TEST(Schur, DilationOfConjugatedModel) {
  const GroupRep r = s3_irrep();
  const CVector psi = rotated_psi(std::numbers::pi / 3, 0.5, std::sqrt(0.75));
  const SchurDilation d = schur_dilation(schur_extension(r, r, psi, {1.0}, 5, true), r, r, psi);
  EXPECT_TRUE(d.verdict);
  EXPECT_LE(d.report.maxResidual, 1e-8);
}

TEST(Schur, DilationRecoversMultiplicityWeights) {
  const GroupRep r = s3_irrep();
  const CVector psi = rotated_psi(std::numbers::pi / 3, 0.5, std::sqrt(0.75));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Model m = schur_extension(r, r, psi, {0.3, 0.7}, seed, true);
    const SchurDilation d = schur_dilation(m, r, r, psi, 1e-9, seed);
    EXPECT_TRUE(d.verdict) << seed;
    EXPECT_LE(d.report.maxResidual, 1e-8);
    std::vector<double> w = d.auxWeights;
    std::sort(w.begin(), w.end());
    ASSERT_EQ(w.size(), 2u);
    EXPECT_NEAR(w[0], std::sqrt(0.3), 1e-9);
    EXPECT_NEAR(w[1], std::sqrt(0.7), 1e-9);
  }
}

TEST(Schur, DilationRejectsBadInputs) {
  const GroupRep r = s3_irrep();
  const CVector psi = rotated_psi(std::numbers::pi / 3, 0.5, std::sqrt(0.75));
  Model m = usom_model(r, r, psi);
  // Spread one diagonal block onto an off-diagonal index: no longer diagonal.
  Model nd = m;
  const std::size_t i = nd.alice.som_index(0, 1, 0, 1), j = nd.alice.som_index(0, 1, 1, 0);
  std::swap(nd.alice.blocks[i], nd.alice.blocks[j]);
  EXPECT_THROW(schur_dilation(nd, r, r, psi), ValidationError);
  const CVector product = rotated_psi(0.4, 1.0, 0.0);
  EXPECT_THROW(schur_dilation(usom_model(r, r, product), r, r, product), ValidationError);
}

}  // namespace
}  // namespace selftest
