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

#include "selftest/dilation.hpp"

#include <algorithm>
#include <cmath>

#include "selftest/random.hpp"

namespace selftest {

namespace {

bool same_shape(const MeasurementFamily& a, const MeasurementFamily& b) {
  return a.is_som() == b.is_som() && a.nX == b.nX && a.nA == b.nA &&
         a.blocks.size() == b.blocks.size();
}

bool is_zero(const CMatrix& m) { return m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

const char* to_string(DilationStatus s) {
  switch (s) {
    case DilationStatus::Dilation: return "dilation";
    case DilationStatus::NotDilation: return "not-dilation";
    case DilationStatus::StateMisaligned: return "state-misaligned";
  }
  return "?";
}

DilationReport verify_dilation(const Model& s, const Model& sTilde, const CMatrix& v,
                               double tol) {
  if (!same_shape(s.alice, sTilde.alice) || !same_shape(s.bob, sTilde.bob))
    throw DimensionMismatch("verify_dilation: models have different scenarios");
  const Eigen::Index n = s.dim(), nt = sTilde.dim();
  if (v.cols() != n || v.rows() % nt != 0)
    throw DimensionMismatch("verify_dilation: isometry shape does not fit the models");
  const Eigen::Index aux = v.rows() / nt;
  DilationReport rep;
  rep.isometryResidual = isometry_residual(v);

  const CVector psi = v * s.state;
  CVector xa = CVector::Zero(aux);
  for (Eigen::Index i = 0; i < nt; ++i)
    xa += std::conj(sTilde.state(i)) * psi.segment(i * aux, aux);
  rep.auxNorm = xa.norm();
  if (rep.auxNorm < 1e-6) {
    rep.status = DilationStatus::StateMisaligned;
    rep.xiAux = xa;
    rep.maxResidual = INFINITY;
    return rep;
  }
  rep.xiAux = xa / rep.auxNorm;

  const std::size_t na = s.alice.blocks.size(), nb = s.bob.blocks.size();
  std::vector<CVector> fx(nb), ftx(nb);
  std::vector<bool> fzero(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    fzero[j] = is_zero(s.bob.blocks[j]) && is_zero(sTilde.bob.blocks[j]);
    if (fzero[j]) continue;
    fx[j] = s.bob_op(j) * s.state;
    ftx[j] = sTilde.bob_op(j) * sTilde.state;
  }
  for (std::size_t i = 0; i < na; ++i) {
    if (is_zero(s.alice.blocks[i]) && is_zero(sTilde.alice.blocks[i])) continue;
    const CMatrix ve = v * s.alice_op(i);
    const CMatrix et = sTilde.alice_op(i);
    for (std::size_t j = 0; j < nb; ++j) {
      if (fzero[j]) continue;
      const CVector lhs = ve * fx[j];
      const CVector rhs = kron(CVector(et * ftx[j]), rep.xiAux);
      PairResidual pr{i, j, (lhs - rhs).norm()};
      rep.residuals.push_back(pr);
      if (pr.residual >= rep.maxResidual) {
        rep.maxResidual = pr.residual;
        rep.worstPair = pr;
      }
    }
  }
  rep.verdict = rep.maxResidual <= tol && rep.isometryResidual <= tol;
  rep.status = rep.verdict ? DilationStatus::Dilation : DilationStatus::NotDilation;
  return rep;
}

DilationReport verify_local_dilation(const Model& s, const Model& sTilde,
                                     const CMatrix& vA, const CMatrix& vB, double tol) {
  if (s.flavor != Flavor::TensorSplit || sTilde.flavor != Flavor::TensorSplit)
    throw Error("verify_local_dilation: both models must be tensor split");
  if (vA.cols() != s.dimA || vB.cols() != s.dimB || vA.rows() % sTilde.dimA != 0 ||
      vB.rows() % sTilde.dimB != 0)
    throw DimensionMismatch("verify_local_dilation: local isometry shapes do not fit");
  const Eigen::Index auxA = vA.rows() / sTilde.dimA, auxB = vB.rows() / sTilde.dimB;
  const CMatrix p = factor_permutation({sTilde.dimA, auxA, sTilde.dimB, auxB}, {0, 2, 1, 3});
  DilationReport rep = verify_dilation(s, sTilde, p * kron(vA, vB), tol);
  rep.isometryResidual = std::max(isometry_residual(vA), isometry_residual(vB));
  if (rep.status != DilationStatus::StateMisaligned) {
    rep.verdict = rep.maxResidual <= tol && rep.isometryResidual <= tol;
    rep.status = rep.verdict ? DilationStatus::Dilation : DilationStatus::NotDilation;
  }
  return rep;
}

Model ampliate(const Model& sTilde, Eigen::Index auxA, Eigen::Index auxB,
               const CVector& xiAux) {
  if (sTilde.flavor != Flavor::TensorSplit) throw Error("ampliate: model must be tensor split");
  if (xiAux.size() != auxA * auxB) throw DimensionMismatch("ampliate: auxiliary state size");
  Model out = sTilde;
  for (auto& b : out.alice.blocks) b = kron(b, identity(auxA));
  for (auto& b : out.bob.blocks) b = kron(b, identity(auxB));
  out.alice.h = out.dimA = sTilde.dimA * auxA;
  out.bob.h = out.dimB = sTilde.dimB * auxB;
  const CMatrix p = factor_permutation({sTilde.dimA, sTilde.dimB, auxA, auxB}, {0, 2, 1, 3});
  out.state = p * kron(sTilde.state, xiAux);
  return out;
}

Equivalence unitary_equivalent(const Model& s1, const Model& s2, double tol,
                               std::uint64_t seed) {
  if (!same_shape(s1.alice, s2.alice) || !same_shape(s1.bob, s2.bob) || s1.dim() != s2.dim())
    throw DimensionMismatch("unitary_equivalent: models differ in shape");
  const Eigen::Index n = s1.dim(), n2 = n * n;
  std::vector<CMatrix> g1, g2;
  for (std::size_t i = 0; i < s1.alice.blocks.size(); ++i) {
    g1.push_back(s1.alice_op(i));
    g2.push_back(s2.alice_op(i));
  }
  for (std::size_t j = 0; j < s1.bob.blocks.size(); ++j) {
    g1.push_back(s1.bob_op(j));
    g2.push_back(s2.bob_op(j));
  }
  // Column-major vec: vec(M2 U) = (I (x) M2) vec U, vec(U M1) = (M1^T (x) I) vec U.
  const CMatrix id = identity(n);
  CMatrix a(Eigen::Index(g1.size()) * n2 + n, n2);
  CVector rhs = CVector::Zero(a.rows());
  Eigen::Index row = 0;
  for (std::size_t k = 0; k < g1.size(); ++k, row += n2)
    a.middleRows(row, n2) = kron(id, g2[k]) - kron(CMatrix(g1[k].transpose()), id);
  a.middleRows(row, n) = kron(CMatrix(s1.state.transpose()), id);
  rhs.segment(row, n) = s2.state;

  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const CVector u0 = svd.solve(rhs);
  const RVector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-10 * sv(0)) ++rank;
  const CMatrix ns = svd.matrixV().rightCols(n2 - rank);

  auto residual = [&](const CMatrix& u) {
    double r = (u * s1.state - s2.state).norm();
    for (std::size_t k = 0; k < g1.size(); ++k)
      r = std::max(r, (u * g1[k] - g2[k] * u).norm() / std::max(1.0, g1[k].norm()));
    return r;
  };
  Rng rng(seed);
  Equivalence best;
  best.residual = INFINITY;
  for (int attempt = 0; attempt < (ns.cols() ? 6 : 1); ++attempt) {
    CVector uv = u0;
    if (attempt > 0) uv += ns * random_ginibre(ns.cols(), 1, rng);
    const CMatrix u = polar_unitary(Eigen::Map<const CMatrix>(uv.data(), n, n));
    const double r = residual(u);
    if (r < best.residual) {
      best.residual = r;
      best.witness = u;
    }
    if (r <= tol * std::max<double>(1.0, double(n))) break;
  }
  best.equivalent = best.residual <= tol * std::max<double>(1.0, double(n));
  if (!best.equivalent) best.witness = CMatrix();
  return best;
}

CMatrix BlockIsometry::stacked() const {
  CMatrix out(nA * k, nX * h);
  for (int a = 0; a < nA; ++a)
    for (int x = 0; x < nX; ++x) out.block(a * k, x * h, k, h) = at(a, x);
  return out;
}

BlockIsometry som_isometry(const MeasurementFamily& e, double tol) {
  if (!e.is_som()) throw Error("som_isometry: family is not an SOM");
  if (Verdict v = validate(e, tol); !v) throw ValidationError("som_isometry: " + v.description, v.magnitude);
  const CMatrix big = som_block_matrix(e);
  const CMatrix g = gram_factor((big + big.adjoint()) / 2.0, tol);
  BlockIsometry out;
  out.nX = e.nX;
  out.nA = e.nA;
  out.h = e.h;
  out.k = g.rows();
  out.v.resize(std::size_t(e.nA) * e.nX);
  for (int a = 0; a < e.nA; ++a)
    for (int x = 0; x < e.nX; ++x)
      out.v[std::size_t(a) * e.nX + x] = g.middleCols((Eigen::Index(x) * e.nA + a) * e.h, e.h);
  for (int x = 0; x < e.nX; ++x)
    for (int xp = 0; xp < e.nX; ++xp) {
      CMatrix s = CMatrix::Zero(e.h, e.h);
      for (int a = 0; a < e.nA; ++a) s += out.at(a, x).adjoint() * out.at(a, xp);
      if (x == xp) s -= identity(e.h);
      out.residual = std::max(out.residual, s.norm());
    }
  if (out.residual > 10 * tol * std::max(1.0, big.norm()))
    throw ValidationError("som_isometry: block isometry certificate fails", out.residual);
  return out;
}

UsomDilation usom_dilate(const MeasurementFamily& e, double tol) {
  if (e.nX != e.nA) throw DimensionMismatch("usom_dilate: needs as many inputs as outputs");
  const BlockIsometry bi = som_isometry(e, tol);
  UsomDilation d;
  d.n = e.nX;
  d.h = bi.h;
  d.k = bi.k;
  d.l = d.h + d.k;
  const CMatrix v = bi.stacked();
  const CMatrix dv = identity(v.rows()) - v * v.adjoint();
  d.u.resize(std::size_t(d.n) * d.n);
  d.full = CMatrix::Zero(d.n * d.l, d.n * d.l);
  for (int a = 0; a < d.n; ++a)
    for (int x = 0; x < d.n; ++x) {
      CMatrix u = CMatrix::Zero(d.l, d.l);
      u.topRightCorner(d.h, d.k) = -bi.at(x, a).adjoint();
      u.bottomLeftCorner(d.k, d.h) = bi.at(a, x);
      u.bottomRightCorner(d.k, d.k) = dv.block(a * d.k, x * d.k, d.k, d.k);
      d.full.block(a * d.l, x * d.l, d.l, d.l) = u;
      d.u[std::size_t(a) * d.n + x] = std::move(u);
    }
  d.w = CMatrix::Zero(d.l, d.h);
  d.w.topRows(d.h) = identity(d.h);
  d.unitaryResidual = unitary_residual(d.full);
  std::vector<CMatrix> blocks(e.blocks.size());
  for (int x = 0; x < d.n; ++x)
    for (int xp = 0; xp < d.n; ++xp)
      for (int a = 0; a < d.n; ++a)
        for (int ap = 0; ap < d.n; ++ap) {
          CMatrix ee = d.at(a, x).adjoint() * d.at(ap, xp);
          d.reconstructionResidual = std::max(
              d.reconstructionResidual, (d.w.adjoint() * ee * d.w - e.som(x, xp, a, ap)).norm());
          blocks[e.som_index(x, xp, a, ap)] = std::move(ee);
        }
  d.usom = MeasurementFamily::som_family(FamilyKind::USOM, d.n, d.n, std::move(blocks));
  return d;
}

MeasurementFamily random_som(int nX, int nA, Eigen::Index h, std::uint64_t seed) {
  if (nX < 1 || nA < 1 || h < 1) throw Error("random_som: sizes must be positive");
  Rng rng(seed);
  const Eigen::Index k = (nX * h + nA - 1) / nA;
  const CMatrix v = random_isometry(nA * k, nX * h, rng);
  std::vector<CMatrix> blocks(std::size_t(nX) * nX * nA * nA, CMatrix::Zero(h, h));
  MeasurementFamily f = MeasurementFamily::som_family(FamilyKind::SOM, nX, nA, std::move(blocks));
  for (int x = 0; x < nX; ++x)
    for (int xp = 0; xp < nX; ++xp)
      for (int a = 0; a < nA; ++a)
        for (int ap = 0; ap < nA; ++ap)
          f.blocks[f.som_index(x, xp, a, ap)] =
              v.block(a * k, x * h, k, h).adjoint() * v.block(ap * k, xp * h, k, h);
  return f;
}

}  // namespace selftest
