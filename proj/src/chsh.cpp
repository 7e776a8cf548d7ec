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

#include "selftest/chsh.hpp"

#include <cmath>

namespace selftest {

namespace {

void require_chsh_shape(const Model& m, const char* what) {
  if (m.alice.is_som() || m.bob.is_som() || m.alice.nX != 2 || m.alice.nA != 2 ||
      m.bob.nX != 2 || m.bob.nA != 2)
    throw Error(std::string(what) + ": needs two binary POVM or PVM measurements per party");
}

// Local observable E_{x,0} - E_{x,1}.
CMatrix observable(const MeasurementFamily& f, int x) { return f.povm(x, 0) - f.povm(x, 1); }

struct SwapPair {
  CMatrix p0, p1;
};

SwapPair swap_projections(const CMatrix& zhat, const CMatrix& xhat) {
  const CMatrix id = identity(zhat.rows());
  return {(id + zhat) / 2.0, xhat * (id - zhat) / 2.0};
}

}  // namespace

Model chsh_ideal_model() {
  const double r = 1.0 / std::sqrt(2.0);
  const CMatrix id = identity(2);
  const CMatrix a0 = r * (pauli_x() + pauli_z()), a1 = r * (pauli_x() - pauli_z());
  const CMatrix b0 = pauli_x(), b1 = pauli_z();
  auto pvm = [&](const CMatrix& o0, const CMatrix& o1) {
    return MeasurementFamily::povm_family(
        FamilyKind::PVM, 2, 2, {(id + o0) / 2.0, (id - o0) / 2.0, (id + o1) / 2.0, (id - o1) / 2.0});
  };
  return Model::tensor(pvm(a0, a1), pvm(b0, b1), max_entangled(2));
}

ChshScore chsh_score(const NsCorrelation& p) {
  if (p.nX != 2 || p.nY != 2 || p.nA != 2 || p.nB != 2)
    throw DimensionMismatch("chsh_score: needs a 2x2x2x2 table");
  ChshScore s;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if (((a + b) & 1) == (x & y)) s.winProb += 0.25 * p.at(x, y, a, b);
  s.bias = 8.0 * (s.winProb - 0.5);
  return s;
}

ChshOperators build_operators(const Model& m, double tol, double optimalityGate) {
  require_chsh_shape(m, "build_operators");
  require_valid(m, tol, "build_operators");
  const Model mc = to_commuting(m);
  ChshOperators op;
  op.A0 = observable(mc.alice, 0);
  op.A1 = observable(mc.alice, 1);
  op.B0 = observable(mc.bob, 0);
  op.B1 = observable(mc.bob, 1);
  const double r = 1.0 / std::sqrt(2.0);
  op.ZA = r * (op.A0 + op.A1);
  op.XA = r * (op.A0 - op.A1);
  op.ZAhat = regularized_polar(op.ZA, tol);
  op.XAhat = regularized_polar(op.XA, tol);
  op.ZBhat = regularized_polar(op.B0, tol);
  op.XBhat = regularized_polar(op.B1, tol);
  const CVector& xi = mc.state;
  const CMatrix beta = op.A0 * op.B0 + op.A0 * op.B1 + op.A1 * op.B0 - op.A1 * op.B1;
  op.bias = xi.dot(beta * xi).real();
  const CMatrix id = identity(mc.dim());
  op.residuals = {
      {"ZA XA + XA ZA", (op.ZA * op.XA + op.XA * op.ZA).norm()},
      {"ZAhat xi - B0 xi", (op.ZAhat * xi - op.B0 * xi).norm()},
      {"XAhat xi - B1 xi", (op.XAhat * xi - op.B1 * xi).norm()},
      {"ZA xi - B0 xi", (op.ZA * xi - op.B0 * xi).norm()},
      {"XA xi - B1 xi", (op.XA * xi - op.B1 * xi).norm()},
      {"(B0 B1 + B1 B0) xi", ((op.B0 * op.B1 + op.B1 * op.B0) * xi).norm()},
      {"(ZAhat XAhat + XAhat ZAhat) xi", ((op.ZAhat * op.XAhat + op.XAhat * op.ZAhat) * xi).norm()},
      {"ZAhat^2 - I", (op.ZAhat * op.ZAhat - id).norm()},
      {"XAhat^2 - I", (op.XAhat * op.XAhat - id).norm()},
  };
  op.certified = std::abs(op.bias - kTsirelsonBias) <= optimalityGate &&
                 max_value(op.residuals) <= 1e3 * tol;
  return op;
}

SwapReport swap_selftest(const Model& m, double tol, double optimalityGate) {
  const ChshOperators op = build_operators(m, tol, optimalityGate);
  const double gap = std::abs(op.bias - kTsirelsonBias);
  if (gap > optimalityGate)
    throw NotOptimal("swap_selftest: CHSH bias is not optimal", gap);
  const Model mc = to_commuting(m);
  const Eigen::Index n = mc.dim();
  const SwapPair pa = swap_projections(op.ZAhat, op.XAhat);
  const SwapPair pb = swap_projections(op.ZBhat, op.XBhat);
  const CMatrix* pA[2] = {&pa.p0, &pa.p1};
  const CMatrix* pB[2] = {&pb.p0, &pb.p1};

  SwapReport rep;
  rep.bias = op.bias;
  CMatrix v12(2 * n, n), v11(2 * n, n);
  CMatrix v22 = CMatrix::Zero(4 * n, 2 * n), v21 = CMatrix::Zero(4 * n, 2 * n);
  for (int i = 0; i < 2; ++i) {
    v12.middleRows(i * n, n) = *pA[i];
    v11.middleRows(i * n, n) = *pB[i];
    for (int j = 0; j < 2; ++j) {
      v22.block((i * 2 + j) * n, i * n, n, n) = *pB[j];
      v21.block((i * 2 + j) * n, j * n, n, n) = *pA[i];
    }
  }
  // The swap outputs the qubit in the Z_A eigenbasis; the ideal model has Z_A = sigma_x, so
  // each extracted qubit is rotated by H, which fixes Omega_2.
  const CMatrix had = (pauli_x() + pauli_z()) / std::sqrt(2.0);
  rep.isometry = kron(kron(had, had), identity(n)) * v22 * v12;
  rep.xiAux = std::sqrt(2.0) * (pb.p0 * (pa.p0 * mc.state));
  rep.residuals = {
      {"V12 isometry", isometry_residual(v12)},
      {"V22 isometry", isometry_residual(v22)},
      {"V21 V11 - V22 V12", (v21 * v11 - v22 * v12).norm()},
  };

  const Model ideal = chsh_ideal_model();
  if (m.flavor == Flavor::TensorSplit) {
    auto local = [&](const MeasurementFamily& f, bool alice) {
      const double r = 1.0 / std::sqrt(2.0);
      const CMatrix o0 = observable(f, 0), o1 = observable(f, 1);
      const CMatrix z = alice ? CMatrix(r * (o0 + o1)) : o0;
      const CMatrix x = alice ? CMatrix(r * (o0 - o1)) : o1;
      const SwapPair p = swap_projections(regularized_polar(z, tol), regularized_polar(x, tol));
      CMatrix v(2 * f.h, f.h);
      v.topRows(f.h) = p.p0;
      v.bottomRows(f.h) = p.p1;
      return CMatrix(kron(had, identity(f.h)) * v);
    };
    rep.localA = local(m.alice, true);
    rep.localB = local(m.bob, false);
    rep.dilation = verify_local_dilation(m, ideal, rep.localA, rep.localB, tol);
  } else {
    rep.dilation = verify_dilation(mc, ideal, rep.isometry, tol);
  }
  if (rep.dilation.status != DilationStatus::StateMisaligned)
    rep.residuals.push_back({"recovered aux - sqrt2 P0B P0A xi", (rep.dilation.xiAux - rep.xiAux).norm()});
  rep.verdict = rep.dilation.verdict && max_value(rep.residuals) <= tol;
  return rep;
}

Model extract_pvm(const Model& m, double tol, double optimalityGate) {
  require_chsh_shape(m, "extract_pvm");
  require_valid(m, tol, "extract_pvm");
  const Model mc = to_commuting(m);
  const CMatrix beta_a0 = observable(mc.alice, 0), beta_a1 = observable(mc.alice, 1);
  const CMatrix beta_b0 = observable(mc.bob, 0), beta_b1 = observable(mc.bob, 1);
  const CVector& xi = mc.state;
  const double bias = xi.dot((beta_a0 * beta_b0 + beta_a0 * beta_b1 + beta_a1 * beta_b0 -
                              beta_a1 * beta_b1) * xi).real();
  if (std::abs(bias - kTsirelsonBias) > optimalityGate)
    throw NotOptimal("extract_pvm: CHSH bias is not optimal", std::abs(bias - kTsirelsonBias));

  Model out = m;
  auto extract = [&](MeasurementFamily& f, bool alice) {
    for (int x = 0; x < 2; ++x) {
      const CMatrix& e0 = f.povm(x, 0);
      const EigenDecomposition ed = herm_eig(e0, tol);
      const double cut = 1.0 - tol * std::max(1.0, op_norm(e0));
      CMatrix p0 = CMatrix::Zero(f.h, f.h);
      for (Eigen::Index k = 0; k < ed.values.size(); ++k)
        if (ed.values(k) >= cut) p0 += ed.vectors.col(k) * ed.vectors.col(k).adjoint();
      const CMatrix p1 = identity(f.h) - p0;
      const std::size_t i0 = f.povm_index(x, 0), i1 = f.povm_index(x, 1);
      const CMatrix je0 = alice ? m.alice_op(i0) : m.bob_op(i0);
      const CMatrix je1 = alice ? m.alice_op(i1) : m.bob_op(i1);
      f.blocks[i0] = p0;
      f.blocks[i1] = p1;
      const CMatrix jp0 = alice ? out.alice_op(i0) : out.bob_op(i0);
      const CMatrix jp1 = alice ? out.alice_op(i1) : out.bob_op(i1);
      const double r = std::max((je0 * m.state - jp0 * m.state).norm(),
                                (je1 * m.state - jp1 * m.state).norm());
      if (r > 10 * tol)
        throw ValidationError("extract_pvm: effect does not act as its 1-eigenprojection on the state", r);
    }
    f.kind = FamilyKind::PVM;
  };
  extract(out.alice, true);
  extract(out.bob, false);
  require_valid(out, tol, "extract_pvm");
  return out;
}

CounterexampleReport counterexample_som(double tol) {
  const Model ideal = chsh_ideal_model();
  const CVector e0 = basis_vector(2, 0), e1 = basis_vector(2, 1);
  auto leading = [&](const CMatrix& e) {
    const EigenDecomposition ed = herm_eig(e, tol);
    return CVector(ed.vectors.col(ed.values.size() - 1));
  };
  auto build = [&](const MeasurementFamily& f) {
    std::vector<CMatrix> blocks(16, CMatrix::Zero(4, 4));
    MeasurementFamily s = MeasurementFamily::som_family(FamilyKind::SOM, 2, 2, blocks);
    for (int x = 0; x < 2; ++x) {
      const CVector k0 = kron(leading(f.povm(x, 0)), e0);
      const CVector k1 = kron(leading(f.povm(x, 1)), e1);
      const CMatrix v = k1 * k0.adjoint();
      s.blocks[s.som_index(x, x, 0, 0)] = kron(f.povm(x, 0), identity(2));
      s.blocks[s.som_index(x, x, 0, 1)] = v.adjoint();
      s.blocks[s.som_index(x, x, 1, 0)] = v;
      s.blocks[s.som_index(x, x, 1, 1)] = kron(f.povm(x, 1), identity(2));
    }
    return s;
  };
  CounterexampleReport rep;
  const CMatrix p = factor_permutation({2, 2, 2, 2}, {0, 2, 1, 3});
  const CVector state = p * kron(max_entangled(2), kron(e0, e0));
  rep.model = Model::tensor(build(ideal.alice), build(ideal.bob), state);
  rep.aliceValid = bool(validate(rep.model.alice, tol));
  rep.bobValid = bool(validate(rep.model.bob, tol));

  const QnsCorrelation g = correlation_qns(rep.model, tol);
  const NsCorrelation target = correlation_ns(ideal, tol);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          rep.qnsDiagonalResidual = std::max(
              rep.qnsDiagonalResidual, std::abs(g.entry(x, x, y, y, a, a, b, b) - target.at(x, y, a, b)));
  rep.qnsResidual = max_abs_diff(g, lift_classical(target));

  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const CMatrix ea = rep.model.alice_op(rep.model.alice.som_index(x, x, a, 1 - a));
          const CMatrix fb = rep.model.bob_op(rep.model.bob.som_index(y, y, b, 1 - b));
          const double o = (ea * (fb * rep.model.state)).norm();
          if (o > rep.obstruction) {
            rep.obstruction = o;
            rep.worst[0] = x;
            rep.worst[1] = y;
            rep.worst[2] = a;
            rep.worst[3] = b;
          }
        }
  rep.verdict = rep.aliceValid && rep.bobValid && rep.qnsDiagonalResidual <= 1e-10 &&
                rep.obstruction > 0.1;
  return rep;
}

}  // namespace selftest
