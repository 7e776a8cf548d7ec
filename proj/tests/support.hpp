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

// Generators for randomized tests.

#pragma once

#include <vector>

#include "selftest/matcore.hpp"
#include "selftest/models.hpp"
#include "selftest/random.hpp"

namespace selftest::testing {

// E_a = V_a^* V_a for a random isometry C^h -> C^{A h}.
inline MeasurementFamily random_povm(int nX, int nA, Eigen::Index h, Rng& rng) {
  std::vector<CMatrix> blocks;
  for (int x = 0; x < nX; ++x) {
    const CMatrix v = random_isometry(nA * h, h, rng);
    for (int a = 0; a < nA; ++a) blocks.push_back(v.middleRows(a * h, h).adjoint() * v.middleRows(a * h, h));
  }
  return MeasurementFamily::povm_family(FamilyKind::POVM, nX, nA, std::move(blocks));
}

// Spectral projections of a random unitary basis, split into A nonempty parts.
inline MeasurementFamily random_pvm(int nX, int nA, Eigen::Index h, Rng& rng) {
  std::vector<CMatrix> blocks;
  for (int x = 0; x < nX; ++x) {
    const CMatrix u = random_unitary(h, rng);
    std::vector<Eigen::Index> owner(static_cast<std::size_t>(h));
    for (Eigen::Index i = 0; i < h; ++i) owner[std::size_t(i)] = i < nA ? i : rng.below(nA);
    for (int a = 0; a < nA; ++a) {
      CMatrix p = CMatrix::Zero(h, h);
      for (Eigen::Index i = 0; i < h; ++i)
        if (owner[std::size_t(i)] == a) p += u.col(i) * u.col(i).adjoint();
      blocks.push_back(p);
    }
  }
  return MeasurementFamily::povm_family(FamilyKind::PVM, nX, nA, std::move(blocks));
}

inline Model random_tensor_model(int nX, int nA, Eigen::Index dA, Eigen::Index dB, Rng& rng) {
  return Model::tensor(random_povm(nX, nA, dA, rng), random_povm(nX, nA, dB, rng),
                       random_state(dA * dB, rng));
}

// Alice pi_i (x) I and Bob I (x) rho_i on sum_i C^{a_i} (x) C^{b_i}, rotated by a
// random unitary. Families are PVMs so the blocks generate interesting algebras.
inline Model random_commuting_model(const std::vector<std::pair<int, int>>& dims, int nX, int nA,
                                    Rng& rng) {
  Eigen::Index total = 0;
  for (auto [a, b] : dims) total += Eigen::Index(a) * b;
  std::vector<CMatrix> ea(std::size_t(nX) * nA, CMatrix::Zero(total, total)), fb = ea;
  Eigen::Index off = 0;
  for (auto [a, b] : dims) {
    const MeasurementFamily e = random_pvm(nX, nA, a, rng), f = random_pvm(nX, nA, b, rng);
    const Eigen::Index n = Eigen::Index(a) * b;
    for (std::size_t i = 0; i < ea.size(); ++i) {
      ea[i].block(off, off, n, n) = kron(e.blocks[i], identity(b));
      fb[i].block(off, off, n, n) = kron(identity(a), f.blocks[i]);
    }
    off += n;
  }
  const CMatrix w = random_unitary(total, rng);
  for (auto& m : ea) m = w * m * w.adjoint();
  for (auto& m : fb) m = w * m * w.adjoint();
  return Model::commuting(total, MeasurementFamily::povm_family(FamilyKind::PVM, nX, nA, ea),
                          MeasurementFamily::povm_family(FamilyKind::PVM, nX, nA, fb),
                          random_state(total, rng));
}

inline Model conjugate_local(const Model& m, const CMatrix& ua, const CMatrix& ub) {
  Model out = m;
  for (auto& b : out.alice.blocks) b = ua * b * ua.adjoint();
  for (auto& b : out.bob.blocks) b = ub * b * ub.adjoint();
  out.state = kron(ua, ub) * m.state;
  return out;
}

}  // namespace selftest::testing
