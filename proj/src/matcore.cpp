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

#include "selftest/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace selftest {

namespace {

std::string dims_str(const CMatrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

// Rebuilds an orthonormal basis of span(q) that depends only on the span:
// pivoted Cholesky of the projector, pivot = first index of largest residual
// diagonal, phase chosen so the pivot entry is real positive.
CMatrix canonical_basis(const CMatrix& q) {
  const Eigen::Index m = q.cols();
  if (m == 0) return q;
  CMatrix r = q * q.adjoint();
  CMatrix out(q.rows(), m);
  for (Eigen::Index k = 0; k < m; ++k) {
    RVector d = r.diagonal().real();
    double best = d.maxCoeff();
    Eigen::Index piv = 0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (d(i) >= best - 1e-10 * std::max(1.0, best)) {
        piv = i;
        break;
      }
    }
    CVector v = r.col(piv) / std::sqrt(std::max(d(piv), 1e-300));
    out.col(k) = v;
    r -= v * v.adjoint();
  }
  return out;
}

}  // namespace

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CMatrix kron_all(const std::vector<CMatrix>& factors) {
  CMatrix out = CMatrix::Ones(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

CMatrix partial_trace(const CMatrix& m, Eigen::Index dA, Eigen::Index dB,
                      Side traced) {
  if (m.rows() != dA * dB || m.cols() != dA * dB)
    throw DimensionMismatch("partial_trace: matrix is " + dims_str(m) +
                            ", expected square of size dA*dB");
  if (traced == Side::B) {
    CMatrix out = CMatrix::Zero(dA, dA);
    for (Eigen::Index i = 0; i < dA; ++i)
      for (Eigen::Index j = 0; j < dA; ++j)
        for (Eigen::Index k = 0; k < dB; ++k)
          out(i, j) += m(i * dB + k, j * dB + k);
    return out;
  }
  CMatrix out = CMatrix::Zero(dB, dB);
  for (Eigen::Index i = 0; i < dA; ++i)
    out += m.block(i * dB, i * dB, dB, dB);
  return out;
}

double frob(const CMatrix& m) { return m.norm(); }

double op_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  // Largest eigenvalue of the smaller Gram matrix; relative accuracy matches the SVD.
  const CMatrix g = m.rows() <= m.cols() ? CMatrix(m * m.adjoint()) : CMatrix(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double hermitian_residual(const CMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).norm();
}

double isometry_residual(const CMatrix& v) {
  return (v.adjoint() * v - identity(v.cols())).norm();
}

double unitary_residual(const CMatrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  return std::max(isometry_residual(u),
                  (u * u.adjoint() - identity(u.rows())).norm());
}

void require_hermitian(const CMatrix& a, double tol, const char* what) {
  if (a.rows() != a.cols())
    throw DimensionMismatch(std::string(what) + ": matrix is " + dims_str(a) +
                            ", expected square");
  if (!a.allFinite()) throw Error(std::string(what) + ": non-finite entry");
  double r = hermitian_residual(a);
  if (r > tol * std::max(1.0, a.norm())) {
    std::ostringstream os;
    os << what << ": not Hermitian, ||a - a*||_F = " << r;
    throw NotHermitian(os.str(), r);
  }
}

EigenDecomposition herm_eig(const CMatrix& a, double tol) {
  require_hermitian(a, tol, "herm_eig");
  EigenDecomposition out;
  if (a.rows() == 0) return out;
  CMatrix h = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw NotConverged("herm_eig: solver failed");
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  const double scale = std::max(1.0, out.values.cwiseAbs().maxCoeff());
  const double gap = std::max(tol, 1e-12) * scale;
  Eigen::Index start = 0;
  const Eigen::Index n = out.values.size();
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && out.values(end) - out.values(end - 1) <= gap) ++end;
    out.vectors.middleCols(start, end - start) =
        canonical_basis(out.vectors.middleCols(start, end - start));
    start = end;
  }
  return out;
}

RVector herm_eigenvalues(const CMatrix& a, double tol) {
  require_hermitian(a, tol, "herm_eigenvalues");
  if (a.rows() == 0) return RVector();
  CMatrix h = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_eigenvalue(const CMatrix& a, double tol) {
  RVector v = herm_eigenvalues(a, tol);
  return v.size() ? v(0) : 0.0;
}

CMatrix gram_factor(const CMatrix& m, double tol) {
  EigenDecomposition ed = herm_eig(m, tol);
  const Eigen::Index n = m.rows();
  if (n == 0) return CMatrix(0, 0);
  const double scale = ed.values.cwiseAbs().maxCoeff();
  if (scale == 0.0) return CMatrix(0, n);
  if (ed.values(0) < -tol * scale) {
    std::ostringstream os;
    os << "gram_factor: not positive semidefinite, min eigenvalue "
       << ed.values(0);
    throw NotPsd(os.str(), ed.values(0));
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = n - 1; i >= 0; --i)
    if (ed.values(i) > tol * scale) keep.push_back(i);
  CMatrix g(static_cast<Eigen::Index>(keep.size()), n);
  for (std::size_t r = 0; r < keep.size(); ++r)
    g.row(static_cast<Eigen::Index>(r)) =
        std::sqrt(ed.values(keep[r])) * ed.vectors.col(keep[r]).adjoint();
  return g;
}

CMatrix regularized_polar(const CMatrix& t, double tol) {
  EigenDecomposition ed = herm_eig(t, tol);
  const Eigen::Index n = t.rows();
  if (n == 0) return CMatrix(0, 0);
  const double scale = ed.values.cwiseAbs().maxCoeff();
  RVector s(n);
  for (Eigen::Index i = 0; i < n; ++i)
    s(i) = (std::abs(ed.values(i)) <= tol * scale) ? 1.0
           : ed.values(i) > 0                        ? 1.0
                                                     : -1.0;
  return ed.vectors * s.cast<cplx>().asDiagonal() * ed.vectors.adjoint();
}

CMatrix polar_unitary(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

CMatrix psd_sqrt(const CMatrix& m, double tol) {
  EigenDecomposition ed = herm_eig(m, tol);
  RVector s = ed.values.cwiseMax(0.0).cwiseSqrt();
  return ed.vectors * s.cast<cplx>().asDiagonal() * ed.vectors.adjoint();
}

std::vector<CMatrix> commutant_basis(const std::vector<CMatrix>& gens,
                                     Eigen::Index dim, double tol) {
  std::vector<CMatrix> out;
  const Eigen::Index d2 = dim * dim;
  if (gens.empty()) {
    for (Eigen::Index j = 0; j < dim; ++j)
      for (Eigen::Index i = 0; i < dim; ++i) {
        CMatrix e = CMatrix::Zero(dim, dim);
        e(i, j) = 1.0;
        out.push_back(e);
      }
    return out;
  }
  for (const auto& g : gens)
    if (g.rows() != dim || g.cols() != dim)
      throw DimensionMismatch("commutant_basis: generator is " + dims_str(g));
  // Column-major vec: vec(XG) = (G^T (x) I) vec X, vec(GX) = (I (x) G) vec X.
  const CMatrix id = identity(dim);
  CMatrix stacked(2 * static_cast<Eigen::Index>(gens.size()) * d2, d2);
  Eigen::Index row = 0;
  for (const auto& g : gens) {
    const CMatrix gd = g.adjoint();
    stacked.middleRows(row, d2) = kron(CMatrix(g.transpose()), id) - kron(id, g);
    row += d2;
    stacked.middleRows(row, d2) =
        kron(CMatrix(gd.transpose()), id) - kron(id, gd);
    row += d2;
  }
  // A system that is rounding noise relative to the generators means all are scalar.
  double ref = 0.0;
  for (const auto& g : gens) ref = std::max(ref, g.norm());
  CMatrix ns = stacked.norm() <= tol * ref ? identity(d2) : null_space(stacked, tol);
  ns = canonical_basis(ns);
  for (Eigen::Index k = 0; k < ns.cols(); ++k) {
    CVector v = ns.col(k);
    out.push_back(Eigen::Map<CMatrix>(v.data(), dim, dim));
  }
  return out;
}

CMatrix orthonormal_span(const CMatrix& v, double tol) {
  if (v.cols() == 0 || v.rows() == 0) return CMatrix(v.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(v, Eigen::ComputeThinU);
  const RVector& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > tol * s(0)) ++r;
  return svd.matrixU().leftCols(r);
}

CMatrix null_space(const CMatrix& a, double tol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0 || n == 0) return identity(n);
  // The Gram spectrum separates directions far from the kernel cheaply; its small
  // end is only accurate to sqrt(eps), so candidates are resolved by an SVD.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(CMatrix(a.adjoint() * a));
  const RVector& lam = es.eigenvalues();
  const double s0 = std::sqrt(std::max(0.0, lam(n - 1)));
  if (s0 == 0.0) return identity(n);
  const double cut = std::max(10.0 * tol, 1e-6) * s0;
  Eigen::Index k = 0;
  while (k < n && lam(k) <= cut * cut) ++k;
  if (k == 0) return CMatrix(n, 0);
  const CMatrix cand = es.eigenvectors().leftCols(k);
  Eigen::JacobiSVD<CMatrix> svd(CMatrix(a * cand), Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > tol * s0) ++r;
  return cand * svd.matrixV().rightCols(k - r);
}

Eigen::Index numerical_rank(const CMatrix& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  const RVector& s = svd.singularValues();
  if (s(0) == 0.0) return 0;
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > tol * s(0)) ++r;
  return r;
}

CMatrix pseudo_inverse(const CMatrix& a, double tol) {
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  CMatrix out = CMatrix::Zero(a.cols(), a.rows());
  if (s.size() == 0 || s(0) == 0.0) return out;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0))
      out += svd.matrixV().col(i) * (1.0 / s(i)) *
             svd.matrixU().col(i).adjoint();
  return out;
}

RVector schmidt_coefficients(const CVector& psi, Eigen::Index dA,
                             Eigen::Index dB) {
  if (psi.size() != dA * dB)
    throw DimensionMismatch("schmidt_coefficients: state size mismatch");
  CMatrix c(dA, dB);
  for (Eigen::Index i = 0; i < dA; ++i)
    for (Eigen::Index j = 0; j < dB; ++j) c(i, j) = psi(i * dB + j);
  Eigen::JacobiSVD<CMatrix> svd(c);
  return svd.singularValues();
}

CMatrix factor_permutation(const std::vector<Eigen::Index>& dims,
                           const std::vector<int>& perm) {
  const std::size_t k = dims.size();
  if (perm.size() != k) throw DimensionMismatch("factor_permutation: arity");
  Eigen::Index total = 1;
  for (auto d : dims) total *= d;
  std::vector<Eigen::Index> out_dims(k);
  for (std::size_t i = 0; i < k; ++i) out_dims[i] = dims[perm[i]];
  CMatrix p = CMatrix::Zero(total, total);
  std::vector<Eigen::Index> idx(k);
  for (Eigen::Index in = 0; in < total; ++in) {
    Eigen::Index rem = in;
    for (std::size_t f = k; f-- > 0;) {
      idx[f] = rem % dims[f];
      rem /= dims[f];
    }
    Eigen::Index out = 0;
    for (std::size_t f = 0; f < k; ++f) out = out * out_dims[f] + idx[perm[f]];
    p(out, in) = 1.0;
  }
  return p;
}

CVector max_entangled(Eigen::Index d) {
  CVector v = CVector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(double(d));
  return v;
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CVector basis_vector(Eigen::Index d, Eigen::Index i) {
  CVector v = CVector::Zero(d);
  v(i) = 1.0;
  return v;
}

}  // namespace selftest
