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

#pragma once

#include <cstdint>
#include <vector>

#include "selftest/models.hpp"

namespace selftest {

struct PairResidual {
  std::size_t alice = 0;
  std::size_t bob = 0;
  double residual = 0.0;
};

enum class DilationStatus { Dilation, NotDilation, StateMisaligned };

const char* to_string(DilationStatus s);

struct DilationReport {
  bool verdict = false;
  DilationStatus status = DilationStatus::NotDilation;
  std::vector<PairResidual> residuals;
  PairResidual worstPair;
  double maxResidual = 0.0;
  double isometryResidual = 0.0;
  double auxNorm = 0.0;
  CVector xiAux;
};

// v maps the joint space of s into (joint space of sTilde) (x) Aux.
DilationReport verify_dilation(const Model& s, const Model& sTilde, const CMatrix& v,
                               double tol = kDefaultTol);

// vA: H_A -> A~ (x) AuxA and vB: H_B -> B~ (x) AuxB, both factor orders with
// the ideal space first.
DilationReport verify_local_dilation(const Model& s, const Model& sTilde,
                                     const CMatrix& vA, const CMatrix& vB,
                                     double tol = kDefaultTol);

// sTilde with operators tensored by identities on the auxiliary factors; the
// local spaces become A~ (x) AuxA and B~ (x) AuxB.
Model ampliate(const Model& sTilde, Eigen::Index auxA, Eigen::Index auxB,
               const CVector& xiAux);

struct Equivalence {
  bool equivalent = false;
  CMatrix witness;
  double residual = 0.0;
};

Equivalence unitary_equivalent(const Model& s1, const Model& s2, double tol = kDefaultTol,
                               std::uint64_t seed = 0);

struct BlockIsometry {
  int nX = 0;
  int nA = 0;
  Eigen::Index h = 0;
  Eigen::Index k = 0;
  std::vector<CMatrix> v;  // v[a*X + x] : C^h -> C^k
  double residual = 0.0;

  const CMatrix& at(int a, int x) const { return v.at(std::size_t(a) * nX + x); }
  // Rows indexed by (a, K), columns by (x, H).
  CMatrix stacked() const;
};

BlockIsometry som_isometry(const MeasurementFamily& e, double tol = kDefaultTol);

struct UsomDilation {
  int n = 0;
  Eigen::Index h = 0;
  Eigen::Index k = 0;
  Eigen::Index l = 0;
  CMatrix w;               // H -> L, h |-> (h, 0)
  std::vector<CMatrix> u;  // u[a*n + x] on L = H (+) K
  CMatrix full;            // (u[a][x]) as an operator on L^n
  MeasurementFamily usom;  // u[a][x]^* u[a'][x'] on L
  double unitaryResidual = 0.0;
  double reconstructionResidual = 0.0;

  const CMatrix& at(int a, int x) const { return u.at(std::size_t(a) * n + x); }
};

UsomDilation usom_dilate(const MeasurementFamily& e, double tol = kDefaultTol);

// E_{x,x',a,a'} = V_{a,x}^* V_{a',x'} from a random isometry C^{X h} -> C^{A k}
// with k = ceil(X h / A).
MeasurementFamily random_som(int nX, int nA, Eigen::Index h, std::uint64_t seed);

}  // namespace selftest
