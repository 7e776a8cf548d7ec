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

// Four matrix-unit systems e_{x,a,a'} (x < 4, a, a' < 2) with a trace state
// tau(m) = tr(trace * m).
struct HomModel {
  Eigen::Index dim = 0;
  std::vector<CMatrix> units;  // index (x*2 + a)*2 + a'
  CMatrix trace;

  const CMatrix& e(int x, int a, int ap) const { return units.at(std::size_t((x * 2 + a) * 2 + ap)); }
  cplx tau(const CMatrix& m) const { return (trace * m).trace(); }
};

// U1 = I, U2 = sx, U3 = sz, U4 = [[0, -i], [i, 0]] (zero based here).
std::vector<CMatrix> pauli_unitaries();
double unitary_error_basis_residual(const std::vector<CMatrix>& us);

HomModel pauli_hom_model();
// Conjugates every unit by w and sets the trace state to w trace w^*.
HomModel conjugate(const HomModel& m, const CMatrix& w);
// units (x) I_k with trace (x) I_k / k.
HomModel ampliate(const HomModel& m, Eigen::Index k);

std::vector<Residual> hom_relations(const HomModel& m, double tol = kDefaultTol);
Verdict validate(const HomModel& m, double tol = kDefaultTol);

CqnsCorrelation gamma_correlation(const HomModel& m, double tol = kDefaultTol);

struct PerfectReport {
  std::vector<Residual> residuals;  // one per (x, y)
  double diagonalResidual = 0.0;
  double offDiagonalResidual = 0.0;
  bool verdict = false;
};

PerfectReport verify_perfect(const CqnsCorrelation& g, int d = 2, double tol = kDefaultTol);

struct PauliForm {
  CMatrix v;  // H -> C^2 (x) C^k with v e_{x,a,a'} v^* = U_x^* eps U_x (x) I_k
  Eigen::Index nDim = 0;
  std::vector<CMatrix> vx;  // per-x intertwiners in the reduced coordinates
  std::vector<Residual> residuals;
  double multimpResidual = 0.0;
  double traceResidual = 0.0;
  bool verdict = false;
};

PauliForm extract_pauli_form(const HomModel& m, double tol = kDefaultTol,
                             std::uint64_t seed = 0);

struct Scenario {
  int vertices = 0;
  std::vector<std::vector<int>> edges;
};

Scenario bell_scenario(int nX, int nA);
// Vertices x_i = i and x_{i,i+1} = n + i; edges {x_i, x_{i+1}, x_{i,i+1}}.
Scenario odd_cycle_scenario(int n);
void require_valid(const Scenario& s);

struct ScenarioReport {
  std::vector<double> edgeResiduals;
  double normalizationResidual = 0.0;
  double negativity = 0.0;
  double nsResidualA = 0.0;
  double nsResidualB = 0.0;
  bool verdict = false;
};

ScenarioReport scenario_check(const Scenario& s, const std::vector<double>& p,
                              double tol = kDefaultTol);
// Product scenario G x H; p indexed by v * |W| + w.
ScenarioReport scenario_check(const Scenario& g, const Scenario& h, const std::vector<double>& p,
                              double tol = kDefaultTol);
std::vector<double> bell_assignment(const NsCorrelation& p);

}  // namespace selftest
