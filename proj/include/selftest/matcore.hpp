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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "selftest/errors.hpp"

namespace selftest {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-9;

enum class Side { A, B };

struct EigenDecomposition {
  RVector values;   // ascending
  CMatrix vectors;  // columns, matching values
};

CMatrix identity(Eigen::Index n);
CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);
CMatrix kron_all(const std::vector<CMatrix>& factors);

// Traces out the named factor of m acting on C^dA (x) C^dB.
CMatrix partial_trace(const CMatrix& m, Eigen::Index dA, Eigen::Index dB,
                      Side traced);

double frob(const CMatrix& m);
double op_norm(const CMatrix& m);
double hermitian_residual(const CMatrix& m);
double isometry_residual(const CMatrix& v);
double unitary_residual(const CMatrix& u);

// Throws NotHermitian when ||a - a^*||_F > tol * max(1, ||a||_F).
void require_hermitian(const CMatrix& a, double tol, const char* what);

EigenDecomposition herm_eig(const CMatrix& a, double tol = kDefaultTol);
RVector herm_eigenvalues(const CMatrix& a, double tol = kDefaultTol);
double min_eigenvalue(const CMatrix& a, double tol = kDefaultTol);

CMatrix gram_factor(const CMatrix& m, double tol = kDefaultTol);
CMatrix regularized_polar(const CMatrix& t, double tol = kDefaultTol);
CMatrix polar_unitary(const CMatrix& a);
CMatrix psd_sqrt(const CMatrix& m, double tol = kDefaultTol);

std::vector<CMatrix> commutant_basis(const std::vector<CMatrix>& gens,
                                     Eigen::Index dim,
                                     double tol = kDefaultTol);

// Orthonormal basis (columns) of the column span of v, rank cut at
// tol * largest singular value.
CMatrix orthonormal_span(const CMatrix& v, double tol = kDefaultTol);
CMatrix null_space(const CMatrix& a, double tol = kDefaultTol);
Eigen::Index numerical_rank(const CMatrix& a, double tol = kDefaultTol);
CMatrix pseudo_inverse(const CMatrix& a, double tol = kDefaultTol);

RVector schmidt_coefficients(const CVector& psi, Eigen::Index dA,
                             Eigen::Index dB);

// Permutation of tensor factors: output factor k is input factor perm[k].
CMatrix factor_permutation(const std::vector<Eigen::Index>& dims,
                           const std::vector<int>& perm);

CVector max_entangled(Eigen::Index d);

CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();
CVector basis_vector(Eigen::Index d, Eigen::Index i);

}  // namespace selftest
