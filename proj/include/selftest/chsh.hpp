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

#include "selftest/dilation.hpp"
#include "selftest/models.hpp"

namespace selftest {

inline constexpr double kTsirelsonBias = 2.8284271247461900976;  // 2 sqrt 2

// A0 = (sx + sz)/sqrt2, A1 = (sx - sz)/sqrt2, B0 = sx, B1 = sz, state
// Omega_2, outcome 0 on the +1 eigenspace.
Model chsh_ideal_model();

struct ChshScore {
  double winProb = 0.0;
  double bias = 0.0;
};

ChshScore chsh_score(const NsCorrelation& p);

struct ChshOperators {
  CMatrix A0, A1, B0, B1;
  CMatrix ZA, XA, ZAhat, XAhat, ZBhat, XBhat;
  double bias = 0.0;
  std::vector<Residual> residuals;
  bool certified = false;
};

// Works on the joint space; tensor-split models are embedded.
ChshOperators build_operators(const Model& m, double tol = kDefaultTol,
                              double optimalityGate = 1e-6);

struct SwapReport {
  bool verdict = false;
  double bias = 0.0;
  DilationReport dilation;
  CMatrix isometry;       // H -> C^2 (x) C^2 (x) H
  CMatrix localA, localB;  // only for tensor-split models
  CVector xiAux;          // sqrt2 P_{0,B} P_{0,A} xi
  std::vector<Residual> residuals;
};

SwapReport swap_selftest(const Model& m, double tol = kDefaultTol,
                         double optimalityGate = 1e-6);

Model extract_pvm(const Model& m, double tol = kDefaultTol, double optimalityGate = 1e-6);

struct CounterexampleReport {
  bool verdict = false;
  Model model;
  bool aliceValid = false;
  bool bobValid = false;
  double qnsDiagonalResidual = 0.0;
  double qnsResidual = 0.0;
  double obstruction = 0.0;
  int worst[4] = {0, 0, 0, 0};  // x, y, a, b of the largest obstruction
};

CounterexampleReport counterexample_som(double tol = kDefaultTol);

}  // namespace selftest
