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
#include <cmath>

#include "selftest/chsh.hpp"
#include "selftest/dilation.hpp"
#include "selftest/errors.hpp"
#include "selftest/matcore.hpp"
#include "selftest/models.hpp"
#include "selftest/random.hpp"
#include "support.hpp"

namespace selftest {
namespace {

using testing::random_commuting_model;
using testing::random_pvm;
using testing::random_tensor_model;

// e_01, the simplest non-Hermitian matrix.
CMatrix raising() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1;
  return m;
}

CMatrix diag(std::initializer_list<double> v) {
  CMatrix m = CMatrix::Zero(Eigen::Index(v.size()), Eigen::Index(v.size()));
  Eigen::Index i = 0;
  for (double x : v) m(i, i) = x, ++i;
  return m;
}

// Hand-expanded oracle for sx (x) sx.
TEST(Kron, PauliXEntries) {
  const CMatrix k = kron(pauli_x(), pauli_x());
  CMatrix want = CMatrix::Zero(4, 4);
  want(0, 3) = want(1, 2) = want(2, 1) = want(3, 0) = 1.0;
  EXPECT_EQ((k - want).norm(), 0.0);
  EXPECT_EQ((kron(identity(2), identity(2)) - identity(4)).norm(), 0.0);
  EXPECT_EQ((kron(basis_vector(2, 0), basis_vector(2, 0)) - basis_vector(4, 0)).norm(), 0.0);
}

TEST(Kron, EntryFormula) {
  Rng rng(1);
  const CMatrix a = random_ginibre(2, 3, rng), b = random_ginibre(3, 2, rng);
  const CMatrix k = kron(a, b);
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 3; ++j)
      for (Eigen::Index r = 0; r < 3; ++r)
        for (Eigen::Index c = 0; c < 2; ++c) EXPECT_EQ(k(i * 3 + r, j * 2 + c), a(i, j) * b(r, c));
}

TEST(Kron, AssociativeAndBilinear) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = random_ginibre(1 + rng.below(3), 1 + rng.below(3), rng);
    const CMatrix b = random_ginibre(1 + rng.below(3), 1 + rng.below(3), rng);
    const CMatrix b2 = random_ginibre(b.rows(), b.cols(), rng);
    const CMatrix c = random_ginibre(1 + rng.below(3), 1 + rng.below(3), rng);
    const cplx s = rng.cnormal();
    EXPECT_LE((kron(kron(a, b), c) - kron(a, kron(b, c))).norm(), 1e-12);
    EXPECT_LE((kron(a, b + s * b2) - kron(a, b) - s * kron(a, b2)).norm(), 1e-12);
  }
}

TEST(PartialTrace, Examples) {
  const CVector omega = max_entangled(2);
  const CMatrix rho = omega * omega.adjoint();
  EXPECT_LE((partial_trace(rho, 2, 2, Side::B) - 0.5 * identity(2)).norm(), 1e-15);
  EXPECT_LE((partial_trace(identity(4), 2, 2, Side::A) - 2.0 * identity(2)).norm(), 1e-15);
  EXPECT_THROW(partial_trace(identity(5), 2, 2, Side::A), DimensionMismatch);
}

TEST(PartialTrace, ProductIdentity) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix r = random_ginibre(3, 3, rng), s = random_ginibre(3, 3, rng);
    const CMatrix m = kron(r, s);
    EXPECT_LE((partial_trace(m, 3, 3, Side::B) - s.trace() * r).norm(), 1e-12);
    EXPECT_LE((partial_trace(m, 3, 3, Side::A) - r.trace() * s).norm(), 1e-12);
    EXPECT_LE(std::abs(partial_trace(m, 3, 3, Side::A).trace() - m.trace()), 1e-12);
  }
}

TEST(HermEig, Examples) {
  RVector v = herm_eigenvalues(pauli_z());
  EXPECT_NEAR(v(0), -1, 1e-15);
  EXPECT_NEAR(v(1), 1, 1e-15);
  v = herm_eigenvalues(kron(pauli_x(), pauli_x()) + kron(pauli_z(), pauli_z()));
  const double want[] = {-2, 0, 0, 2};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(v(i), want[i], 1e-12);
  v = herm_eigenvalues(diag({3, 1, 2}));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(v(i), i + 1, 1e-15);
  EXPECT_THROW(herm_eig(raising()), NotHermitian);
}

TEST(HermEig, InvariantsAndDeterminism) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + rng.below(5);
    CMatrix a = random_hermitian(n, rng);
    if (trial % 2) {  // force a degenerate eigenspace
      const CMatrix u = random_unitary(n, rng);
      RVector d = RVector::Zero(n);
      for (Eigen::Index i = 0; i < n; ++i) d(i) = i < 2 ? 1.0 : double(i);
      a = u * d.cast<cplx>().asDiagonal() * u.adjoint();
    }
    const EigenDecomposition e = herm_eig(a);
    for (Eigen::Index i = 1; i < n; ++i) EXPECT_LE(e.values(i - 1), e.values(i));
    EXPECT_LE((a - e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint()).norm(),
              1e-9 * a.norm());
    EXPECT_LE((e.vectors.adjoint() * e.vectors - identity(n)).norm(), 1e-9);
    const EigenDecomposition again = herm_eig(CMatrix(a));
    EXPECT_EQ((e.vectors - again.vectors).norm(), 0.0);
  }
}

TEST(GramFactor, Examples) {
  EXPECT_LE((gram_factor(identity(3)).adjoint() * gram_factor(identity(3)) - identity(3)).norm(), 1e-12);
  Rng rng(5);
  const CVector v = random_state(4, rng);
  const CMatrix g = gram_factor(v * v.adjoint());
  EXPECT_EQ(g.rows(), 1);
  EXPECT_LE((g.adjoint() * g - v * v.adjoint()).norm(), 1e-12);
  try {
    gram_factor(diag({1, -0.1}));
    FAIL() << "expected NotPsd";
  } catch (const NotPsd& e) {
    EXPECT_NEAR(e.min_eigenvalue, -0.1, 1e-12);
  }
}

TEST(GramFactor, ReproducesGram) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix f = random_ginibre(1 + rng.below(4), 5, rng);
    const CMatrix m = f.adjoint() * f;
    const CMatrix g = gram_factor(m);
    EXPECT_LE((g.adjoint() * g - m).norm(), 10 * kDefaultTol * m.norm());
    EXPECT_LE((g.adjoint() * g - m).norm(), 1e-12 * std::max(1.0, m.norm()));
  }
}

TEST(RegularizedPolar, Examples) {
  EXPECT_LE((regularized_polar(diag({2, 0, -3})) - diag({1, 1, -1})).norm(), 1e-12);
  const Model ideal = chsh_ideal_model();
  const CMatrix z = (ideal.alice.povm(0, 0) - ideal.alice.povm(0, 1) + ideal.alice.povm(1, 0) -
                     ideal.alice.povm(1, 1)) / std::sqrt(2.0);
  const CMatrix u = regularized_polar(z);
  EXPECT_LE(unitary_residual(u), 1e-12);
  EXPECT_LE((u * u - identity(2)).norm(), 1e-12);
  Rng rng(7);
  const CMatrix w = random_unitary(4, rng);
  const CMatrix herm_unitary = w * diag({1, -1, -1, 1}) * w.adjoint();
  EXPECT_LE((regularized_polar(herm_unitary) - herm_unitary).norm(), 1e-12);
  EXPECT_THROW(regularized_polar(raising()), NotHermitian);
}

TEST(RegularizedPolar, CommutesAndSquaresToIdentity) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + rng.below(4);
    const CMatrix w = random_unitary(n, rng);
    RVector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = 2.5 * double(rng.below(3) - 1);
    const CMatrix t = w * d.cast<cplx>().asDiagonal() * w.adjoint();
    const CMatrix u = regularized_polar(t);
    EXPECT_LE(unitary_residual(u), 1e-9);
    EXPECT_LE((t * u - u * t).norm(), 1e-9);
    EXPECT_LE((u * u - identity(n)).norm(), 1e-9);
  }
}

TEST(Commutant, Examples) {
  auto c = commutant_basis({pauli_x(), pauli_z()}, 2);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_LE((c[0] - identity(2) / std::sqrt(2.0)).norm(), 1e-12);
  EXPECT_EQ(commutant_basis({}, 3).size(), 9u);
  std::vector<CMatrix> gens;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CMatrix e = CMatrix::Zero(2, 2);
      e(i, j) = 1;
      gens.push_back(kron(e, identity(2)));
    }
  EXPECT_EQ(commutant_basis(gens, 4).size(), 4u);
}

TEST(Commutant, CommutesAndDoubleCommutantDimension) {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    // pi (x) I_k with pi generic: commutant I (x) M_k, double commutant M_d (x) I.
    const Eigen::Index d = 1 + rng.below(3), k = 1 + rng.below(2);
    std::vector<CMatrix> gens{kron(random_ginibre(d, d, rng), identity(k)),
                              kron(random_ginibre(d, d, rng), identity(k))};
    const auto c = commutant_basis(gens, d * k);
    EXPECT_EQ(Eigen::Index(c.size()), k * k);
    for (const auto& x : c)
      for (const auto& g : gens) EXPECT_LE((x * g - g * x).norm(), 1e-9);
    const auto cc = commutant_basis(c, d * k);
    EXPECT_EQ(Eigen::Index(cc.size()), d == 1 ? 1 : d * d);
  }
}

// ---- models

TEST(Validate, FamilyExamples) {
  std::vector<CMatrix> trivial(16, CMatrix::Zero(1, 1));
  MeasurementFamily som = MeasurementFamily::som_family(FamilyKind::SOM, 2, 2, trivial);
  for (int x = 0; x < 2; ++x)
    for (int xp = 0; xp < 2; ++xp) som.blocks[som.som_index(x, xp, x, xp)] = identity(1);
  EXPECT_TRUE(validate(som).valid);

  const Model ideal = chsh_ideal_model();
  EXPECT_EQ(ideal.bob.kind, FamilyKind::PVM);
  EXPECT_TRUE(validate(ideal.bob).valid);

  MeasurementFamily bad = ideal.bob;
  for (auto& b : bad.blocks) b *= 0.9;
  bad.kind = FamilyKind::POVM;
  const Verdict v = validate(bad);
  EXPECT_FALSE(v.valid);
  EXPECT_NEAR(v.magnitude, 0.1, 1e-12);
}

TEST(CorrelationNs, Examples) {
  const NsCorrelation p = correlation_ns(chsh_ideal_model());
  double win = 0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if (((a + b) % 2) == (x * y)) win += p.at(x, y, a, b) / 4;
  EXPECT_NEAR(win, 0.5 + 1 / (2 * std::sqrt(2.0)), 1e-12);

  const CMatrix p0 = diag({1, 0}), p1 = diag({0, 1});
  MeasurementFamily z = MeasurementFamily::povm_family(FamilyKind::PVM, 2, 2, {p0, p1, p0, p1});
  const NsCorrelation q = correlation_ns(Model::tensor(z, z, basis_vector(4, 0)));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) EXPECT_NEAR(q.at(x, y, 0, 0), 1.0, 1e-15);
}

TEST(CorrelationNs, NsAndLocalUnitaryInvariance) {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const Model m = random_tensor_model(2 + rng.below(2), 2 + rng.below(2), 2, 3, rng);
    const NsCorrelation p = correlation_ns(m);
    EXPECT_TRUE(validate(p, 1e-9).valid);
    const Model c = testing::conjugate_local(m, random_unitary(2, rng), random_unitary(3, rng));
    EXPECT_LE(max_abs_diff(p, correlation_ns(c)), 1e-10);
    EXPECT_TRUE(validate(lift_classical(p), 1e-9).valid);
  }
}

// Oracle: tensor-split and commuting embeddings must agree.
TEST(CorrelationNs, CommutingEmbeddingAgrees) {
  Rng rng(11);
  const Model m = random_tensor_model(2, 2, 2, 2, rng);
  EXPECT_LE(max_abs_diff(correlation_ns(m), correlation_ns(to_commuting(m))), 1e-13);
}

Model diagonal_som_model(const Model& m) {
  auto lift = [](const MeasurementFamily& f) {
    std::vector<CMatrix> blocks(std::size_t(f.nX) * f.nX * f.nA * f.nA, CMatrix::Zero(f.h, f.h));
    MeasurementFamily s = MeasurementFamily::som_family(FamilyKind::SOM, f.nX, f.nA, blocks);
    for (int x = 0; x < f.nX; ++x)
      for (int a = 0; a < f.nA; ++a) s.blocks[s.som_index(x, x, a, a)] = f.povm(x, a);
    return s;
  };
  return Model::tensor(lift(m.alice), lift(m.bob), m.state);
}

TEST(CorrelationQns, DiagonalMatchesNs) {
  const Model ideal = chsh_ideal_model();
  const NsCorrelation p = correlation_ns(ideal);
  const QnsCorrelation g = correlation_qns(diagonal_som_model(ideal));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          EXPECT_NEAR(std::abs(g.entry(x, x, y, y, a, a, b, b) - p.at(x, y, a, b)), 0.0, 1e-12);
}

TEST(CorrelationQns, TrivialSomIsIdentityChannel) {
  std::vector<CMatrix> blocks(16, CMatrix::Zero(1, 1));
  MeasurementFamily som = MeasurementFamily::som_family(FamilyKind::SOM, 2, 2, blocks);
  for (int x = 0; x < 2; ++x)
    for (int xp = 0; xp < 2; ++xp) som.blocks[som.som_index(x, xp, x, xp)] = identity(1);
  const QnsCorrelation g = correlation_qns(Model::tensor(som, som, basis_vector(1, 0)));
  for (int x = 0; x < 2; ++x)
    for (int xp = 0; xp < 2; ++xp)
      for (int y = 0; y < 2; ++y)
        for (int yp = 0; yp < 2; ++yp)
          for (int a = 0; a < 2; ++a)
            for (int ap = 0; ap < 2; ++ap)
              for (int b = 0; b < 2; ++b)
                for (int bp = 0; bp < 2; ++bp) {
                  const double want = (a == x && ap == xp && b == y && bp == yp) ? 1.0 : 0.0;
                  EXPECT_NEAR(std::abs(g.entry(x, xp, y, yp, a, ap, b, bp) - want), 0.0, 1e-15);
                }
}

TEST(LiftClassical, Examples) {
  NsCorrelation det = NsCorrelation::zeros(2, 2, 2, 2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) det.at(x, y, 0, 0) = 1;
  const QnsCorrelation g = lift_classical(det);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      CMatrix want = CMatrix::Zero(4, 4);
      want(0, 0) = 1;
      EXPECT_LE((g.output(x, x, y, y) - want).norm(), 1e-15);
    }
  EXPECT_LE(g.output(0, 1, 0, 0).norm(), 1e-15);
  EXPECT_TRUE(validate(lift_classical(correlation_ns(chsh_ideal_model()))).valid);
}

TEST(SupportData, Examples) {
  const SupportData s = support_data(chsh_ideal_model());
  EXPECT_TRUE(s.fullRank);
  EXPECT_LE((s.epsA - identity(4)).norm(), 1e-9);

  // Full algebra on a product state: eps_A projects onto e0 (x) C^2.
  Rng rng(12);
  const MeasurementFamily fa = random_pvm(3, 2, 2, rng), fb = random_pvm(3, 2, 2, rng);
  const SupportData p = support_data(Model::tensor(fa, fb, basis_vector(4, 0)));
  CMatrix e00 = CMatrix::Zero(2, 2);
  e00(0, 0) = 1;
  EXPECT_LE((p.epsA - kron(e00, identity(2))).norm(), 1e-8);
  EXPECT_LE((p.epsB - kron(identity(2), e00)).norm(), 1e-8);
  EXPECT_FALSE(p.fullRank);
}

TEST(SupportData, ReducedCorrelationPreservedAndFlags) {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const Model m = random_commuting_model({{2, 1}, {1, 2}}, 2, 2, rng);
    const SupportData s = support_data(m);
    EXPECT_LE(max_abs_diff(correlation_ns(m), correlation_ns(s.reduced)), 1e-9);
    EXPECT_LE((s.epsA * m.state - m.state).norm(), 1e-9);
    EXPECT_LE((s.epsA * s.epsA - s.epsA).norm(), 1e-9);
    double comm = 0;
    for (const auto& e : alice_generators(m)) comm = std::max(comm, (s.epsA * e - e * s.epsA).norm());
    EXPECT_EQ(s.centrallySupported, comm <= 1e-8) << comm;
  }
}

TEST(SplitCommuting, ProductModelIsOneBlock) {
  Rng rng(14);
  const Model m = to_commuting(random_tensor_model(2, 2, 2, 2, rng));
  const SplitResult r = split_commuting(m);
  ASSERT_EQ(r.components.size(), 1u);
  EXPECT_NEAR(r.components[0].weight, 1.0, 1e-10);
}

TEST(SplitCommuting, WeightsOfDirectSum) {
  // CHSH block and a classical block with weights 0.3 / 0.7.
  const Model chsh = chsh_ideal_model();
  const Eigen::Index n = 5;
  std::vector<CMatrix> ea(4, CMatrix::Zero(n, n)), fb = ea;
  for (int i = 0; i < 4; ++i) {
    ea[std::size_t(i)].topLeftCorner(4, 4) = kron(chsh.alice.blocks[std::size_t(i)], identity(2));
    fb[std::size_t(i)].topLeftCorner(4, 4) = kron(identity(2), chsh.bob.blocks[std::size_t(i)]);
    ea[std::size_t(i)](4, 4) = fb[std::size_t(i)](4, 4) = (i % 2 == 0) ? 1.0 : 0.0;
  }
  CVector xi = CVector::Zero(n);
  xi.head(4) = std::sqrt(0.3) * chsh.state;
  xi(4) = std::sqrt(0.7);
  const Model m = Model::commuting(n, MeasurementFamily::povm_family(FamilyKind::PVM, 2, 2, ea),
                                   MeasurementFamily::povm_family(FamilyKind::PVM, 2, 2, fb), xi);
  const SplitResult r = split_commuting(m);
  std::vector<double> w;
  for (const auto& c : r.components) w.push_back(c.weight);
  std::sort(w.begin(), w.end());
  ASSERT_EQ(w.size(), 2u);
  EXPECT_NEAR(w[0], 0.3, 1e-10);
  EXPECT_NEAR(w[1], 0.7, 1e-10);
}

TEST(SplitCommuting, MultiplicityDetected) {
  Rng rng(15);
  const MeasurementFamily e = random_pvm(2, 2, 2, rng);
  std::vector<CMatrix> ea, fb;
  // Bob always answers 0, so Alice's algebra acts as pi (x) I_2.
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a) {
      ea.push_back(kron(e.povm(x, a), identity(2)));
      fb.push_back(a == 0 ? identity(4) : CMatrix::Zero(4, 4));
    }
  const Model m = Model::commuting(4, MeasurementFamily::povm_family(FamilyKind::PVM, 2, 2, ea),
                                   MeasurementFamily::povm_family(FamilyKind::PVM, 2, 2, fb),
                                   random_state(4, rng));
  const SplitResult r = split_commuting(m);
  ASSERT_EQ(r.blocks.size(), 1u);
  EXPECT_EQ(r.blocks[0].copies, 2);
}

TEST(SplitCommuting, RandomReassembly) {
  Rng rng(16);
  for (int trial = 0; trial < 10; ++trial) {
    const Model m = random_commuting_model({{2, 1}, {1, 2}, {2, 2}}, 2, 2, rng);
    const SplitResult r = split_commuting(m, 1e-9, std::uint64_t(trial));
    double sum = 0;
    std::vector<double> w;
    std::vector<NsCorrelation> ps;
    for (const auto& c : r.components) {
      sum += c.weight;
      w.push_back(c.weight);
      ps.push_back(correlation_ns(c.model));
    }
    EXPECT_NEAR(sum, 1.0, 1e-10);
    EXPECT_LE(max_abs_diff(weighted_sum(w, ps), correlation_ns(m)), 1e-9);
  }
}

TEST(SplitCommuting, RejectsNonCommuting) {
  const Model ideal = chsh_ideal_model();
  // Alice's Z and X projections used for Bob as well: the parties do not commute.
  const Model bad = Model::commuting(2, ideal.alice, ideal.alice, basis_vector(2, 0));
  EXPECT_THROW(split_commuting(bad), ValidationError);
}

// ---- dilation

TEST(Dilation, IdentityIsDilation) {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Model m = random_tensor_model(2, 2, 2, 2, rng);
    const DilationReport r = verify_local_dilation(m, m, identity(2), identity(2));
    EXPECT_TRUE(r.verdict);
    EXPECT_LE(r.maxResidual, 1e-12);
    EXPECT_NEAR(std::abs(r.xiAux(0)), 1.0, 1e-12);
  }
}

TEST(Dilation, AmpliationIsDilation) {
  Rng rng(18);
  for (int trial = 0; trial < 10; ++trial) {
    const Model m = random_tensor_model(2, 2, 2, 3, rng);
    const Eigen::Index aa = 1 + rng.below(3), ab = 1 + rng.below(3);
    const CVector aux = random_state(aa * ab, rng);
    const Model big = ampliate(m, aa, ab, aux);
    EXPECT_LE(max_abs_diff(correlation_ns(big), correlation_ns(m)), 1e-12);
    const DilationReport r = verify_local_dilation(big, m, identity(2 * aa), identity(3 * ab));
    EXPECT_TRUE(r.verdict) << r.maxResidual;
    EXPECT_LE((r.xiAux - aux).norm(), 1e-9);
  }
}

TEST(Dilation, AmpliateExamples) {
  const Model ideal = chsh_ideal_model();
  EXPECT_LE(max_abs_diff(correlation_ns(ampliate(ideal, 2, 2, max_entangled(2))), correlation_ns(ideal)), 1e-12);
  const CVector aux = kron(basis_vector(2, 0), basis_vector(2, 1));
  EXPECT_LE(max_abs_diff(correlation_ns(ampliate(ideal, 2, 2, aux)), correlation_ns(ideal)), 1e-12);
  const Model same = ampliate(ideal, 1, 1, basis_vector(1, 0));
  EXPECT_LE((same.state - ideal.state).norm(), 1e-15);
}

TEST(Dilation, SwappedObservablesFail) {
  const Model ideal = chsh_ideal_model();
  Model swapped = ideal;
  std::swap(swapped.alice.blocks[0], swapped.alice.blocks[2]);
  std::swap(swapped.alice.blocks[1], swapped.alice.blocks[3]);
  const DilationReport r = verify_local_dilation(swapped, ideal, identity(2), identity(2));
  EXPECT_FALSE(r.verdict);
  EXPECT_GT(r.maxResidual, 0.1);
}

TEST(UnitaryEquivalent, Examples) {
  Rng rng(19);
  const Model ideal = chsh_ideal_model();
  const Equivalence self = unitary_equivalent(ideal, ideal);
  EXPECT_TRUE(self.equivalent);
  const Model c = testing::conjugate_local(ideal, random_unitary(2, rng), random_unitary(2, rng));
  const Equivalence e = unitary_equivalent(ideal, c);
  EXPECT_TRUE(e.equivalent);
  EXPECT_LE(e.residual, 1e-8);

  const CMatrix p0 = diag({1, 0}), p1 = diag({0, 1});
  MeasurementFamily z = MeasurementFamily::povm_family(FamilyKind::PVM, 2, 2, {p0, p1, p0, p1});
  EXPECT_FALSE(unitary_equivalent(ideal, Model::tensor(z, z, basis_vector(4, 0))).equivalent);
}

TEST(SomIsometry, TrivialAndChsh) {
  std::vector<CMatrix> blocks(16, CMatrix::Zero(1, 1));
  MeasurementFamily som = MeasurementFamily::som_family(FamilyKind::SOM, 2, 2, blocks);
  for (int x = 0; x < 2; ++x)
    for (int xp = 0; xp < 2; ++xp) som.blocks[som.som_index(x, xp, x, xp)] = identity(1);
  BlockIsometry b = som_isometry(som);
  EXPECT_LE(b.residual, 1e-12);
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) EXPECT_NEAR(b.at(a, x).norm(), a == x ? 1.0 : 0.0, 1e-12);

  const Model d = diagonal_som_model(chsh_ideal_model());
  b = som_isometry(d.alice);
  EXPECT_LE(b.residual, 1e-10);
}

TEST(UsomDilate, RandomSoms) {
  Rng rng(20);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + rng.below(3);
    const MeasurementFamily f = random_som(n, n, 1 + rng.below(3), std::uint64_t(100 + trial));
    ASSERT_TRUE(validate(f).valid);
    const UsomDilation d = usom_dilate(f);
    EXPECT_LE(d.unitaryResidual, 1e-9);
    EXPECT_LE(d.reconstructionResidual, 1e-9);
    EXPECT_LE(isometry_residual(d.w), 1e-12);
    EXPECT_EQ(d.l, d.h + d.k);
    EXPECT_TRUE(validate(d.usom).valid);
  }
}

// Oracle: the reconstruction identity recomputed here from the returned blocks.
TEST(UsomDilate, ReconstructionRecomputed) {
  const MeasurementFamily f = random_som(2, 2, 2, 7);
  const UsomDilation d = usom_dilate(f);
  double worst = 0;
  for (int x = 0; x < 2; ++x)
    for (int xp = 0; xp < 2; ++xp)
      for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap)
          worst = std::max(worst, (d.w.adjoint() * d.at(a, x).adjoint() * d.at(ap, xp) * d.w -
                                   f.som(x, xp, a, ap)).norm());
  EXPECT_LE(worst, 1e-9);
  EXPECT_LE(unitary_residual(d.full), 1e-9);
}

TEST(UsomDilate, RejectsUnequalIndexSets) {
  EXPECT_THROW(usom_dilate(random_som(2, 3, 1, 0)), Error);
}

}  // namespace
}  // namespace selftest
