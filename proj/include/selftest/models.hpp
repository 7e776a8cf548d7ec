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

#include "selftest/matcore.hpp"

namespace selftest {

enum class FamilyKind { POVM, PVM, SOM, USOM };

const char* to_string(FamilyKind k);

// Blocks are stored flat. POVM/PVM: index x*A + a. SOM/USOM: index
// ((x*X + x')*A + a)*A + a'.
struct MeasurementFamily {
  FamilyKind kind = FamilyKind::POVM;
  int nX = 0;
  int nA = 0;
  Eigen::Index h = 0;
  std::vector<CMatrix> blocks;

  bool is_som() const { return kind == FamilyKind::SOM || kind == FamilyKind::USOM; }
  std::size_t povm_index(int x, int a) const { return std::size_t(x) * nA + a; }
  std::size_t som_index(int x, int xp, int a, int ap) const {
    return ((std::size_t(x) * nX + xp) * nA + a) * nA + ap;
  }
  const CMatrix& povm(int x, int a) const { return blocks.at(povm_index(x, a)); }
  const CMatrix& som(int x, int xp, int a, int ap) const {
    return blocks.at(som_index(x, xp, a, ap));
  }

  static MeasurementFamily povm_family(FamilyKind kind, int nX, int nA,
                                       std::vector<CMatrix> blocks);
  static MeasurementFamily som_family(FamilyKind kind, int nX, int nA,
                                      std::vector<CMatrix> blocks);
};

// (x, a) x (x', a') block matrix of an SOM; row index (x*A + a)*h + i.
CMatrix som_block_matrix(const MeasurementFamily& f);

struct Residual {
  std::string name;
  double value = 0.0;
};

double max_value(const std::vector<Residual>& rs);

struct Verdict {
  bool valid = true;
  std::string description;
  double magnitude = 0.0;

  static Verdict ok() { return {}; }
  static Verdict violation(std::string what, double magnitude) {
    return {false, std::move(what), magnitude};
  }
  explicit operator bool() const { return valid; }
};

Verdict validate(const MeasurementFamily& f, double tol = kDefaultTol);

enum class Flavor { TensorSplit, Commuting };

struct Model {
  Flavor flavor = Flavor::TensorSplit;
  // TensorSplit: local dimensions. Commuting: dimA = dimH, dimB = 1 and the
  // families act on the whole space.
  Eigen::Index dimA = 0;
  Eigen::Index dimB = 0;
  MeasurementFamily alice;
  MeasurementFamily bob;
  CVector state;

  Eigen::Index dim() const { return flavor == Flavor::TensorSplit ? dimA * dimB : dimA; }
  CMatrix alice_op(std::size_t i) const;
  CMatrix bob_op(std::size_t i) const;

  static Model tensor(MeasurementFamily alice, MeasurementFamily bob, CVector state);
  static Model commuting(Eigen::Index dimH, MeasurementFamily alice,
                         MeasurementFamily bob, CVector state);
};

Verdict validate(const Model& m, double tol = kDefaultTol);
void require_valid(const Model& m, double tol, const char* what);
Model to_commuting(const Model& m);

struct NsCorrelation {
  int nX = 0, nY = 0, nA = 0, nB = 0;
  std::vector<double> p;
  bool synchronous = false;

  std::size_t index(int x, int y, int a, int b) const {
    return ((std::size_t(x) * nY + y) * nA + a) * nB + b;
  }
  double at(int x, int y, int a, int b) const { return p.at(index(x, y, a, b)); }
  double& at(int x, int y, int a, int b) { return p.at(index(x, y, a, b)); }
  static NsCorrelation zeros(int nX, int nY, int nA, int nB);
};

// Gamma stored through its Choi matrix: row ((x*Y + y)*A + a)*B + b, column
// the primed indices. Entry = Gamma[x][x'][y][y'][a][a'][b][b'].
struct QnsCorrelation {
  int nX = 0, nY = 0, nA = 0, nB = 0;
  CMatrix choi;

  Eigen::Index index(int x, int y, int a, int b) const {
    return ((Eigen::Index(x) * nY + y) * nA + a) * nB + b;
  }
  cplx entry(int x, int xp, int y, int yp, int a, int ap, int b, int bp) const {
    return choi(index(x, y, a, b), index(xp, yp, ap, bp));
  }
  // Gamma(eps_{x,x'} (x) eps_{y,y'}) as an (A*B) x (A*B) matrix.
  CMatrix output(int x, int xp, int y, int yp) const;
};

// Classical inputs, quantum outputs: blocks[x*Y + y] = Gamma(eps_xx (x) eps_yy).
struct CqnsCorrelation {
  int nX = 0, nY = 0, nA = 0, nB = 0;
  std::vector<CMatrix> blocks;

  const CMatrix& block(int x, int y) const { return blocks.at(std::size_t(x) * nY + y); }
};

Verdict validate(const NsCorrelation& p, double tol = kDefaultTol);
Verdict validate(const QnsCorrelation& g, double tol = kDefaultTol);
Verdict validate(const CqnsCorrelation& g, double tol = kDefaultTol);

NsCorrelation correlation_ns(const Model& m, double tol = kDefaultTol);
QnsCorrelation correlation_qns(const Model& m, double tol = kDefaultTol);
QnsCorrelation lift_classical(const NsCorrelation& p);
CqnsCorrelation classical_inputs(const QnsCorrelation& g);
double max_abs_diff(const NsCorrelation& p, const NsCorrelation& q);
double max_abs_diff(const QnsCorrelation& p, const QnsCorrelation& q);
NsCorrelation weighted_sum(const std::vector<double>& w,
                           const std::vector<NsCorrelation>& ps);

// Span of words of length <= maxWordLen in gens and their adjoints, returned
// as a Frobenius-orthonormal basis. Throws NotConverged if the span is still
// growing at the last level.
std::vector<CMatrix> word_algebra_basis(const std::vector<CMatrix>& gens,
                                        Eigen::Index dim, int maxWordLen,
                                        double tol = kDefaultTol);

std::vector<CMatrix> alice_generators(const Model& m);
std::vector<CMatrix> bob_generators(const Model& m);

struct SupportData {
  CMatrix epsA;
  CMatrix epsB;
  Model reduced;
  bool fullRank = false;
  bool centrallySupported = false;
  Eigen::Index algebraDimA = 0;
  Eigen::Index algebraDimB = 0;
};

SupportData support_data(const Model& m, int maxWordLen = 8, double tol = kDefaultTol);

// One isotypic block of a *-algebra: columns of basis span it, ordered as
// H_i (x) K_i with the irrep index major, so that basis^* g basis equals
// pi_i(g) (x) I_{copies}.
struct AlgebraBlock {
  CMatrix basis;
  Eigen::Index irrepDim = 0;
  Eigen::Index copies = 0;
};

std::vector<AlgebraBlock> decompose_algebra(const std::vector<CMatrix>& gens,
                                            Eigen::Index dim, double tol = kDefaultTol,
                                            std::uint64_t seed = 0);

struct SplitComponent {
  double weight = 0.0;
  Model model;
  Eigen::Index block = 0;
};

struct SplitResult {
  std::vector<SplitComponent> components;
  std::vector<AlgebraBlock> blocks;
  double structureResidual = 0.0;
  double reassemblyResidual = 0.0;
};

SplitResult split_commuting(const Model& m, double tol = kDefaultTol,
                            std::uint64_t seed = 0);

}  // namespace selftest
