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

#include "selftest/schur.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "selftest/errors.hpp"
#include "selftest/random.hpp"

namespace selftest {

FiniteGroup FiniteGroup::from_table(int order, std::vector<int> table,
                                    std::vector<std::string> labels) {
  if (order <= 0) throw ValidationError("group: order must be positive", double(order));
  if (table.size() != std::size_t(order) * order)
    throw DimensionMismatch("group: table must have order^2 entries");
  FiniteGroup g;
  g.order = order;
  g.table = std::move(table);
  for (int v : g.table)
    if (v < 0 || v >= order) throw ValidationError("group: table not closed", double(v));
  if (labels.empty())
    for (int s = 0; s < order; ++s) labels.push_back(std::to_string(s));
  if (labels.size() != std::size_t(order)) throw DimensionMismatch("group: label count");
  g.labels = std::move(labels);

  g.identity = -1;
  for (int e = 0; e < order && g.identity < 0; ++e) {
    bool ok = true;
    for (int s = 0; s < order && ok; ++s) ok = g.mul(e, s) == s && g.mul(s, e) == s;
    if (ok) g.identity = e;
  }
  if (g.identity < 0) throw ValidationError("group: no identity element", 1.0);
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b)
      for (int c = 0; c < order; ++c)
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
          throw ValidationError("group: table is not associative", 1.0);
  g.inverse.assign(std::size_t(order), -1);
  for (int s = 0; s < order; ++s) {
    for (int t = 0; t < order; ++t)
      if (g.mul(s, t) == g.identity && g.mul(t, s) == g.identity) g.inverse[std::size_t(s)] = t;
    if (g.inverse[std::size_t(s)] < 0)
      throw ValidationError("group: element " + g.labels[std::size_t(s)] + " has no inverse", 1.0);
  }
  return g;
}

FiniteGroup symmetric_group3() {
  const std::array<std::array<int, 3>, 6> perms = {{
      {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}}};
  std::vector<int> table(36);
  for (int s = 0; s < 6; ++s)
    for (int t = 0; t < 6; ++t) {
      std::array<int, 3> c{};
      for (int i = 0; i < 3; ++i) c[i] = perms[s][perms[t][i]];
      table[std::size_t(s) * 6 + t] =
          int(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return FiniteGroup::from_table(6, std::move(table), {"e", "(123)", "(132)", "(12)", "(23)", "(13)"});
}

FiniteGroup cyclic_group(int n) {
  if (n <= 0) throw ValidationError("cyclic_group: order must be positive", double(n));
  std::vector<int> table(std::size_t(n) * n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) table[std::size_t(s) * n + t] = (s + t) % n;
  return FiniteGroup::from_table(n, std::move(table));
}

static void check_perm(const std::vector<int>& perm, int n) {
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; ++i)
    if (sorted.size() != std::size_t(n) || sorted[std::size_t(i)] != i)
      throw ValidationError("relabel: not a permutation", 1.0);
}

FiniteGroup relabel(const FiniteGroup& g, const std::vector<int>& perm) {
  check_perm(perm, g.order);
  std::vector<int> table(g.table.size());
  std::vector<std::string> labels(std::size_t(g.order));
  for (int s = 0; s < g.order; ++s) {
    labels[std::size_t(perm[s])] = g.labels[std::size_t(s)];
    for (int t = 0; t < g.order; ++t)
      table[std::size_t(perm[s]) * g.order + perm[t]] = perm[std::size_t(g.mul(s, t))];
  }
  return FiniteGroup::from_table(g.order, std::move(table), std::move(labels));
}

Verdict validate(const GroupRep& r, double tol) {
  if (r.mats.size() != std::size_t(r.group.order))
    return Verdict::violation("representation: one matrix per group element required",
                              double(r.mats.size()));
  for (const auto& m : r.mats)
    if (m.rows() != r.dim || m.cols() != r.dim)
      return Verdict::violation("representation: matrix shape differs from dim", 1.0);
  double worst = 0.0;
  for (const auto& m : r.mats) worst = std::max(worst, unitary_residual(m));
  if (worst > tol) return Verdict::violation("representation: matrix not unitary", worst);
  for (int s = 0; s < r.group.order; ++s)
    for (int t = 0; t < r.group.order; ++t)
      worst = std::max(worst, frob(r.mats[std::size_t(s)] * r.mats[std::size_t(t)] -
                                   r.mats[std::size_t(r.group.mul(s, t))]));
  if (worst > tol) return Verdict::violation("representation: not multiplicative", worst);
  Verdict v = Verdict::ok();
  v.magnitude = worst;
  return v;
}

GroupRep s3_irrep() {
  const cplx w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0), wb = std::conj(w);
  GroupRep r;
  r.group = symmetric_group3();
  r.dim = 2;
  auto m = [](cplx a, cplx b, cplx c, cplx d) {
    CMatrix out(2, 2);
    out << a, b, c, d;
    return out;
  };
  r.mats = {m(1, 0, 0, 1), m(w, 0, 0, wb), m(wb, 0, 0, w),
            m(0, 1, 1, 0), m(0, wb, w, 0), m(0, w, wb, 0)};
  return r;
}

GroupRep trivial_rep(const FiniteGroup& g) {
  return {g, std::vector<CMatrix>(std::size_t(g.order), identity(1)), 1};
}

GroupRep relabel(const GroupRep& r, const std::vector<int>& perm) {
  GroupRep out{relabel(r.group, perm), std::vector<CMatrix>(r.mats.size()), r.dim};
  for (std::size_t s = 0; s < r.mats.size(); ++s) out.mats[std::size_t(perm[s])] = r.mats[s];
  return out;
}

CVector rotated_psi(double theta, cplx alpha, cplx beta, double tol) {
  const double norm = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm - 1.0) > tol)
    throw ValidationError("rotated_psi: |alpha|^2 + |beta|^2 must be 1", std::abs(norm - 1.0));
  CVector e(2), f(2);
  e << std::cos(theta / 2), std::sin(theta / 2);
  f << -std::sin(theta / 2), std::cos(theta / 2);
  return alpha * kron(e, e) + beta * kron(f, f);
}

static void check_pair(const GroupRep& piA, const GroupRep& piB, const CVector& psi, double tol) {
  if (piA.group.order != piB.group.order || piA.group.table != piB.group.table)
    throw DimensionMismatch("representations act on different groups");
  for (const GroupRep* r : {&piA, &piB}) {
    const Verdict v = validate(*r, tol);
    if (!v.valid) throw ValidationError(v.description, v.magnitude);
  }
  if (psi.size() != piA.dim * piB.dim) throw DimensionMismatch("state size differs from dA*dB");
  if (std::abs(psi.norm() - 1.0) > tol)
    throw ValidationError("state is not a unit vector", std::abs(psi.norm() - 1.0));
}

SchurData schur_channel(const GroupRep& piA, const GroupRep& piB, const CVector& psi, double tol) {
  check_pair(piA, piB, psi, tol);
  const FiniteGroup& g = piA.group;
  const int n = g.order;
  SchurData d;
  d.group = g;
  d.psi = psi;
  d.u.resize(n, n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      d.u(s, t) = psi.dot(kron(piA.mats[std::size_t(s)], piB.mats[std::size_t(t)]) * psi);
  d.positivity.resize(n * n, n * n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      for (int sp = 0; sp < n; ++sp)
        for (int tp = 0; tp < n; ++tp)
          d.positivity(s * n + t, sp * n + tp) = d.u(g.mul(g.inv(s), sp), g.mul(g.inv(t), tp));
  d.minEigenvalue = min_eigenvalue(d.positivity, tol);
  // Theta(I) = sum_{s,t} u(e,e) e_ss (x) e_tt and Tr Theta(e_ss' (x) e_tt') = delta u(e,e).
  double unital = 0.0, tp = 0.0;
  for (Eigen::Index i = 0; i < n * n; ++i) {
    unital += std::norm(d.positivity(i, i) - 1.0);
    tp = std::max(tp, std::abs(d.positivity(i, i) - 1.0));
  }
  d.unitalResidual = std::sqrt(unital);
  d.tpResidual = tp;
  d.cptp = d.minEigenvalue >= -tol && d.unitalResidual <= tol && d.tpResidual <= tol;
  return d;
}

CMatrix schur_choi(const SchurData& d) {
  const Eigen::Index n2 = Eigen::Index(d.group.order) * d.group.order;
  CMatrix c = CMatrix::Zero(n2 * n2, n2 * n2);
  for (Eigen::Index i = 0; i < n2; ++i)
    for (Eigen::Index j = 0; j < n2; ++j) c(i * n2 + i, j * n2 + j) = d.positivity(i, j);
  return c;
}

Hypotheses selftest_hypotheses(const GroupRep& piA, const GroupRep& piB, const CVector& psi,
                               double tol) {
  check_pair(piA, piB, psi, tol);
  Hypotheses h;
  h.schmidt = schmidt_coefficients(psi, piA.dim, piB.dim);
  Eigen::Index srank = 0;
  for (Eigen::Index i = 0; i < h.schmidt.size(); ++i)
    if (h.schmidt(i) > tol) ++srank;
  h.marginallyCyclic = piA.dim == piB.dim && srank == piA.dim;

  const int n = piA.group.order;
  const Eigen::Index d = piA.dim * piB.dim;
  CMatrix vecs(d * d, Eigen::Index(n) * n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      const CVector v = kron(piA.mats[std::size_t(s)], piB.mats[std::size_t(t)]) * psi;
      const CMatrix p = v * v.adjoint();
      vecs.col(s * n + t) = Eigen::Map<const CVector>(p.data(), d * d);
    }
  h.extremalityRank = numerical_rank(vecs, std::max(tol, 1e-12));
  h.verdict = h.marginallyCyclic && h.extremalityRank == d * d;
  return h;
}

static MeasurementFamily usom_family(const std::vector<CMatrix>& u) {
  const int n = int(u.size());
  const Eigen::Index h = u.front().rows();
  std::vector<CMatrix> blocks(std::size_t(n) * n * n * n, CMatrix::Zero(h, h));
  MeasurementFamily f = MeasurementFamily::som_family(FamilyKind::USOM, n, n, std::move(blocks));
  for (int s = 0; s < n; ++s)
    for (int sp = 0; sp < n; ++sp)
      f.blocks[f.som_index(s, sp, s, sp)] = u[std::size_t(s)].adjoint() * u[std::size_t(sp)];
  return f;
}

Model usom_model(const GroupRep& piA, const GroupRep& piB, const CVector& psi) {
  check_pair(piA, piB, psi, kDefaultTol);
  return Model::tensor(usom_family(piA.mats), usom_family(piB.mats), psi);
}

Model schur_extension(const GroupRep& piA, const GroupRep& piB, const CVector& psi,
                      const std::vector<double>& weights, std::uint64_t seed, bool conjugate) {
  check_pair(piA, piB, psi, kDefaultTol);
  if (weights.empty()) throw ValidationError("schur_extension: no weights", 0.0);
  double total = 0.0;
  for (double w : weights) {
    if (w < 0) throw ValidationError("schur_extension: negative weight", w);
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ValidationError("schur_extension: weights must sum to 1", std::abs(total - 1.0));
  const Eigen::Index m = Eigen::Index(weights.size());
  CVector k = CVector::Zero(m * m);
  for (Eigen::Index i = 0; i < m; ++i) k(i * m + i) = std::sqrt(weights[std::size_t(i)]);
  CVector xi = factor_permutation({piA.dim, piB.dim, m, m}, {0, 2, 1, 3}) * kron(psi, k);

  CMatrix wA = identity(piA.dim * m), wB = identity(piB.dim * m);
  if (conjugate) {
    Rng rng(seed);
    wA = random_unitary(wA.rows(), rng);
    wB = random_unitary(wB.rows(), rng);
  }
  std::vector<CMatrix> ua, ub;
  for (const auto& p : piA.mats) ua.push_back(wA * kron(p, identity(m)) * wA.adjoint());
  for (const auto& p : piB.mats) ub.push_back(wB * kron(p, identity(m)) * wB.adjoint());
  return Model::tensor(usom_family(ua), usom_family(ub), kron(wA, wB) * xi);
}

namespace {

// Unitary part of the SOM: U_s = E_{e,s,e,s}, checked against E_{s,s',s,s'} = U_s^* U_s'.
struct Local {
  std::vector<CMatrix> u;
  std::vector<AlgebraBlock> blocks;
  double diagonality = 0.0;
  double factorization = 0.0;
};

Local local_data(const MeasurementFamily& f, int e, double tol, std::uint64_t seed) {
  Local l;
  const int n = f.nX;
  for (int s = 0; s < n; ++s)
    for (int sp = 0; sp < n; ++sp)
      for (int g = 0; g < n; ++g)
        for (int gp = 0; gp < n; ++gp)
          if (g != s || gp != sp) l.diagonality = std::max(l.diagonality, frob(f.som(s, sp, g, gp)));
  for (int s = 0; s < n; ++s) l.u.push_back(f.som(e, s, e, s));
  for (int s = 0; s < n; ++s)
    for (int sp = 0; sp < n; ++sp)
      l.factorization = std::max(l.factorization,
                                 frob(f.som(s, sp, s, sp) - l.u[std::size_t(s)].adjoint() * l.u[std::size_t(sp)]));
  for (const auto& u : l.u) l.factorization = std::max(l.factorization, unitary_residual(u));
  if (l.diagonality <= tol && l.factorization <= tol)
    l.blocks = decompose_algebra(l.u, f.h, tol, seed);
  return l;
}

// X with pi(s) X = X sigma(s) for all s, scaled to an isometry C^n -> H_pi.
CMatrix intertwiner(const std::vector<CMatrix>& pi, const std::vector<CMatrix>& sigma, double tol) {
  const Eigen::Index dp = pi.front().rows(), ds = sigma.front().rows();
  if (dp != ds) throw ValidationError("block dimension differs from the reference irrep", double(ds));
  CMatrix sys(Eigen::Index(pi.size()) * dp * ds, dp * ds);
  for (std::size_t s = 0; s < pi.size(); ++s)
    sys.middleRows(Eigen::Index(s) * dp * ds, dp * ds) =
        kron(identity(ds), pi[s]) - kron(sigma[s].transpose(), identity(dp));
  const CMatrix ns = null_space(sys, std::max(tol, 1e-10));
  if (ns.cols() != 1)
    throw ValidationError("block is not equivalent to the reference irrep", double(ns.cols()));
  CMatrix x = Eigen::Map<const CMatrix>(ns.data(), dp, ds);
  x *= std::sqrt(double(ds)) / x.norm();
  Eigen::Index r = 0, c = 0;
  x.cwiseAbs().maxCoeff(&r, &c);
  x *= std::conj(x(r, c)) / std::abs(x(r, c));
  return x;
}

std::vector<CMatrix> irrep_images(const std::vector<CMatrix>& u, const AlgebraBlock& b) {
  std::vector<CMatrix> out;
  const Eigen::Index n = b.irrepDim, k = b.copies;
  for (const auto& g : u) {
    const CMatrix c = b.basis.adjoint() * g * b.basis;
    CMatrix s(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) s(i, j) = c(i * k, j * k);
    out.push_back(s);
  }
  return out;
}

}  // namespace

SchurDilation schur_dilation(const Model& m, const GroupRep& piA, const GroupRep& piB,
                             const CVector& psi, double tol, std::uint64_t seed) {
  check_pair(piA, piB, psi, tol);
  if (m.flavor != Flavor::TensorSplit) throw Error("schur_dilation: model must be tensor split");
  const int n = piA.group.order, e = piA.group.identity;
  for (const MeasurementFamily* f : {&m.alice, &m.bob})
    if (!f->is_som() || f->nX != n || f->nA != n)
      throw DimensionMismatch("schur_dilation: families must be SOMs indexed by the group");
  require_valid(m, tol, "schur_dilation");

  SchurDilation out;
  const Local la = local_data(m.alice, e, tol, seed), lb = local_data(m.bob, e, tol, seed + 1);
  out.diagonalityResidual = std::max(la.diagonality, lb.diagonality);
  out.residuals.push_back({"diagonality", out.diagonalityResidual});
  out.residuals.push_back({"unitary_factorization", std::max(la.factorization, lb.factorization)});
  if (out.diagonalityResidual > tol)
    throw ValidationError("schur_dilation: input SOM is not diagonal", out.diagonalityResidual);
  if (std::max(la.factorization, lb.factorization) > tol)
    throw ValidationError("schur_dilation: diagonal blocks are not of the form U_s^* U_s'",
                          std::max(la.factorization, lb.factorization));

  const CMatrix rho = m.state * m.state.adjoint();
  const double minA = min_eigenvalue(partial_trace(rho, m.dimA, m.dimB, Side::B), tol);
  const double minB = min_eigenvalue(partial_trace(rho, m.dimA, m.dimB, Side::A), tol);
  out.residuals.push_back({"reduced_min_eigenvalue", std::min(minA, minB)});
  if (std::min(minA, minB) <= tol)
    throw ValidationError("schur_dilation: state does not have full-rank marginals",
                          std::min(minA, minB));

  // On the diagonal both correlations are products of unitaries against the state.
  const SchurData ideal = schur_channel(piA, piB, psi, tol);
  for (int s = 0; s < n; ++s)
    for (int sp = 0; sp < n; ++sp)
      for (int t = 0; t < n; ++t)
        for (int tp = 0; tp < n; ++tp) {
          const CMatrix ua = la.u[std::size_t(s)].adjoint() * la.u[std::size_t(sp)];
          const CMatrix ub = lb.u[std::size_t(t)].adjoint() * lb.u[std::size_t(tp)];
          const CMatrix op = kron(ua, ub);
          const cplx got = m.state.dot(op * m.state);
          const cplx want = ideal.u(piA.group.mul(piA.group.inv(s), sp),
                                    piA.group.mul(piA.group.inv(t), tp));
          out.correlationResidual = std::max(out.correlationResidual, std::abs(got - want));
        }
  out.residuals.push_back({"correlation", out.correlationResidual});
  if (out.correlationResidual > tol)
    throw ValidationError("schur_dilation: correlation differs from the ideal one",
                          out.correlationResidual);

  // Coefficients of the state in the block bases: xi_{ijkl} in H_i (x) H_j.
  const std::size_t na = la.blocks.size(), nb = lb.blocks.size();
  struct Pair {
    std::vector<CVector> xi;  // indexed k*copiesB + l
    std::vector<double> p;
    double weight = 0.0;
  };
  std::vector<Pair> pairs(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      const AlgebraBlock &bi = la.blocks[i], &bj = lb.blocks[j];
      const CVector c = kron(bi.basis, bj.basis).adjoint() * m.state;
      Pair& pr = pairs[i * nb + j];
      for (Eigen::Index k = 0; k < bi.copies; ++k)
        for (Eigen::Index l = 0; l < bj.copies; ++l) {
          CVector v(bi.irrepDim * bj.irrepDim);
          for (Eigen::Index ha = 0; ha < bi.irrepDim; ++ha)
            for (Eigen::Index hb = 0; hb < bj.irrepDim; ++hb)
              v(ha * bj.irrepDim + hb) =
                  c((ha * bi.copies + k) * (bj.irrepDim * bj.copies) + hb * bj.copies + l);
          pr.p.push_back(v.squaredNorm());
          pr.weight += v.squaredNorm();
          pr.xi.push_back(std::move(v));
        }
    }

  std::vector<bool> inA(na, false), inB(nb, false);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      if (pairs[i * nb + j].weight > tol) inA[i] = inB[j] = true;

  std::vector<CMatrix> wA(na), wB(nb);
  for (std::size_t i = 0; i < na; ++i)
    if (inA[i]) wA[i] = intertwiner(piA.mats, irrep_images(la.u, la.blocks[i]), tol);
  for (std::size_t j = 0; j < nb; ++j)
    if (inB[j]) wB[j] = intertwiner(piB.mats, irrep_images(lb.u, lb.blocks[j]), tol);

  // Local isometries into H_pi (x) aux.
  auto build = [](const std::vector<AlgebraBlock>& blocks, const std::vector<bool>& in,
                  const std::vector<CMatrix>& w, Eigen::Index dpi, Eigen::Index dim,
                  std::vector<Eigen::Index>& offset) {
    Eigen::Index aux = 0;
    offset.clear();
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      offset.push_back(aux);
      aux += in[i] ? blocks[i].copies : blocks[i].irrepDim * blocks[i].copies;
    }
    CMatrix t = CMatrix::Zero(dpi * aux, dim);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const AlgebraBlock& b = blocks[i];
      for (Eigen::Index h = 0; h < b.irrepDim; ++h)
        for (Eigen::Index k = 0; k < b.copies; ++k) {
          const CVector src = b.basis.col(h * b.copies + k);
          CVector img;
          if (in[i]) {
            img = kron(CVector(w[i].col(h)), basis_vector(aux, offset[i] + k));
          } else {
            img = kron(basis_vector(dpi, 0), basis_vector(aux, offset[i] + h * b.copies + k));
          }
          t += img * src.adjoint();
        }
    }
    return t;
  };
  std::vector<Eigen::Index> offA, offB;
  out.tA = build(la.blocks, inA, wA, piA.dim, m.dimA, offA);
  out.tB = build(lb.blocks, inB, wB, piB.dim, m.dimB, offB);
  const Eigen::Index auxA = out.tA.rows() / piA.dim, auxB = out.tB.rows() / piB.dim;

  out.xiAux = CVector::Zero(auxA * auxB);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      const Pair& pr = pairs[i * nb + j];
      if (pr.weight <= tol) continue;
      const CMatrix w = kron(wA[i], wB[j]);
      const Eigen::Index cb = lb.blocks[j].copies;
      for (Eigen::Index k = 0; k < la.blocks[i].copies; ++k)
        for (Eigen::Index l = 0; l < cb; ++l) {
          const cplx c = psi.dot(w * pr.xi[std::size_t(k * cb + l)]);
          out.xiAux((offA[i] + k) * auxB + offB[j] + l) = c;
        }
    }

  const RVector sc = schmidt_coefficients(out.xiAux, auxA, auxB);
  for (Eigen::Index i = 0; i < sc.size(); ++i)
    if (sc(i) > tol) out.auxWeights.push_back(sc(i));

  out.report = verify_local_dilation(m, usom_model(piA, piB, psi), out.tA, out.tB, tol);
  if (out.report.xiAux.size() == out.xiAux.size())
    out.auxResidual = (out.report.xiAux - out.xiAux).norm();
  else
    out.auxResidual = std::numeric_limits<double>::infinity();
  out.residuals.push_back({"dilation", out.report.maxResidual});
  out.residuals.push_back({"isometry", out.report.isometryResidual});
  out.residuals.push_back({"aux_state", out.auxResidual});
  out.verdict = out.report.verdict && out.auxResidual <= tol;
  return out;
}

}  // namespace selftest
