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

#include "selftest/random.hpp"

namespace selftest {

CMatrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.cnormal();
  return m;
}

CMatrix random_unitary(Eigen::Index n, Rng& rng) {
  return random_isometry(n, n, rng);
}

CMatrix random_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMatrix g = random_ginibre(rows, cols, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(rows, cols);
  CMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  // Haar measure needs the phases of diag(R) divided out.
  for (Eigen::Index j = 0; j < cols; ++j) {
    cplx d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

CMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  CMatrix g = random_ginibre(n, n, rng);
  return (g + g.adjoint()) / 2.0;
}

CVector random_state(Eigen::Index n, Rng& rng) {
  CVector v = random_ginibre(n, 1, rng);
  return v / v.norm();
}

}  // namespace selftest
