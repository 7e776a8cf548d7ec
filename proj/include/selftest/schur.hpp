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
#include <string>
#include <vector>

#include "selftest/dilation.hpp"
#include "selftest/models.hpp"

namespace selftest {

struct FiniteGroup {
  int order = 0;
  int identity = 0;
  std::vector<int> table;  // table[s*order + t] = st
  std::vector<int> inverse;
  std::vector<std::string> labels;

  int mul(int s, int t) const { return table.at(std::size_t(s) * order + t); }
  int inv(int s) const { return inverse.at(std::size_t(s)); }

  // Checks closure, associativity, identity and inverses exhaustively.
  static FiniteGroup from_table(int order, std::vector<int> table, std::vector<std::string> labels = {});
};

// e, (123), (132), (12), (23), (13) with (st)(i) = s(t(i)).
FiniteGroup symmetric_group3();
FiniteGroup cyclic_group(int n);
// Same group with element s renamed perm[s].
FiniteGroup relabel(const FiniteGroup& g, const std::vector<int>& perm);

struct GroupRep {
  FiniteGroup group;
  std::vector<CMatrix> mats;
  Eigen::Index dim = 0;
};

Verdict validate(const GroupRep& r, double tol = kDefaultTol);
GroupRep s3_irrep();
GroupRep trivial_rep(const FiniteGroup& g);
GroupRep relabel(const GroupRep& r, const std::vector<int>& perm);

// alpha e_t (x) e_t + beta f_t (x) f_t with e_t = (cos t/2, sin t/2) and
// f_t = (-sin t/2, cos t/2).
CVector rotated_psi(double theta, cplx alpha, cplx beta, double tol = kDefaultTol);

struct SchurData {
  FiniteGroup group;
  CMatrix u;           // u(s, t) = <(pi(s) (x) rho(t)) psi, psi>
  CVector psi;
  CMatrix positivity;  // [u(s^-1 s', t^-1 t')], row s*|G| + t
  double minEigenvalue = 0.0;
  double unitalResidual = 0.0;
  double tpResidual = 0.0;
  bool cptp = false;
};

SchurData schur_channel(const GroupRep& piA, const GroupRep& piB, const CVector& psi,
                        double tol = kDefaultTol);
// Choi matrix of the Schur multiplier, input (s,t) major, output (s,t) minor.
CMatrix schur_choi(const SchurData& d);

struct Hypotheses {
  bool marginallyCyclic = false;
  Eigen::Index extremalityRank = 0;
  bool verdict = false;
  RVector schmidt;
};

Hypotheses selftest_hypotheses(const GroupRep& piA, const GroupRep& piB, const CVector& psi,
                               double tol = kDefaultTol);

Model usom_model(const GroupRep& piA, const GroupRep& piB, const CVector& psi);

// Ideal data with the local spaces extended by multiplicity spaces carrying
// sum_k sqrt(w_k) e_k (x) e_k; optionally conjugated by random local unitaries.
Model schur_extension(const GroupRep& piA, const GroupRep& piB, const CVector& psi,
                      const std::vector<double>& weights, std::uint64_t seed = 0,
                      bool conjugate = true);

struct SchurDilation {
  DilationReport report;
  CMatrix tA, tB;
  CVector xiAux;                 // assembled from the block data
  std::vector<double> auxWeights;  // Schmidt coefficients of xiAux above tol
  double auxResidual = 0.0;      // |recovered - assembled|
  double correlationResidual = 0.0;
  double diagonalityResidual = 0.0;
  std::vector<Residual> residuals;
  bool verdict = false;
};

SchurDilation schur_dilation(const Model& m, const GroupRep& piA, const GroupRep& piB,
                             const CVector& psi, double tol = kDefaultTol, std::uint64_t seed = 0);

}  // namespace selftest
