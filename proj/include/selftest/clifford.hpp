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

#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "selftest/models.hpp"

namespace selftest {

// Anticommuting self-adjoint unitaries on (C^2)^{(x) n/2}:
// u_{2k} = Y^{(x)k} (x) X (x) I..., u_{2k+1} = Y^{(x)k} (x) Z (x) I...
std::vector<CMatrix> clifford_rep(int n);

// || 4pq + 4qp - 4p - 4q + 2I ||_F; p and q must be projections.
double quotient_relation_check(const CMatrix& p, const CMatrix& q, double tol = kDefaultTol);

// p(a,b|x,y) = tr(r_{x,a} r_{y,b}) / d with r_{x,a} = (I + (-1)^a u_x) / 2.
NsCorrelation clifford_correlation(int n, double tol = kDefaultTol);
// p(a,b|x,y) = <(r_{x,a} (x) r_{y,b}) psi, psi>.
NsCorrelation clifford_correlation(int n, const CVector& psi, double tol = kDefaultTol);

// Alice r_{x,a}, Bob r_{y,b}^T, maximally entangled state; reproduces the
// canonical correlation.
Model clifford_canonical_model(int n);

struct WitnessKernel {
  CMatrix witness;  // n I - sum_x u_x (x) u_x
  RVector eigenvalues;
  CMatrix kernel;
  double minEigenvalue = 0.0;
};

WitnessKernel witness_kernel(int n, double tol = kDefaultTol);

struct Letter {
  bool bob = false;
  int x = 0;
  int a = 0;
  auto operator<=>(const Letter&) const = default;
};

using Word = std::vector<Letter>;

Letter e_letter(int x, int a);
Letter f_letter(int y, int b);
// Idempotents collapse and Alice letters move left of Bob letters.
Word reduce(const Word& w);
Word star(const Word& w);
Word concat(const Word& a, const Word& b);
std::string to_string(const Word& w);
bool word_less(const Word& a, const Word& b);

using Completion = std::vector<std::pair<Word, cplx>>;

class InconsistentCompletion : public Error {
 public:
  InconsistentCompletion(const std::string& what, Word first, Word second)
      : Error(what), first(std::move(first)), second(std::move(second)) {}
  Word first, second;
};

struct MomentMatrix {
  std::vector<Word> words;
  CMatrix m;  // m(alpha, beta) = s(beta^* alpha)
  double minEigenvalue = 0.0;
  bool psd = false;

  Eigen::Index index_of(const Word& w) const;
  cplx at(const Word& alpha, const Word& beta) const;
};

MomentMatrix moment_matrix(const NsCorrelation& corr, const std::vector<Word>& words,
                           const Completion& completion, double tol = kDefaultTol);

// s(w) = <pi(alice part) pi(bob part) xi, xi> for every product beta^* alpha.
Completion completion_from_model(const Model& m, const std::vector<Word>& words);
cplx evaluate_word(const Model& m, const Word& w);

// epsilon, e_{x,0}, and w_{x,y} = e_{x,0} e_{y,0} for x != y.
std::vector<Word> ac_words(int nX);
std::vector<Word> level1_words(int nX, int nA, int nY, int nB);

struct AcReport {
  struct Pair {
    int x = 0;
    int y = 0;
    double residual = 0.0;
  };
  std::vector<Pair> pairs;
  double maxResidual = 0.0;
  bool verdict = false;
};

AcReport check_ac(const MomentMatrix& m, int nX, double tol = kDefaultTol);

// Moment matrix over ac_words filled in from the model, then check_ac.
AcReport ac_check(const Model& m, double tol = kDefaultTol);

// nX independent fair bits: p_x projects bit x of (C^2)^{(x) nX} onto 0, Bob
// holds the same projections and the state is maximally entangled.
Model independent_bits_model(int nX);

}  // namespace selftest
