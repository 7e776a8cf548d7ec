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

#include "selftest/games.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "selftest/random.hpp"

namespace selftest {

namespace {

CMatrix eps(int a, int ap) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(a, ap) = 1.0;
  return m;
}

}  // namespace

std::vector<CMatrix> pauli_unitaries() {
  CMatrix u4(2, 2);
  u4 << 0, cplx(0, -1), cplx(0, 1), 0;
  return {identity(2), pauli_x(), pauli_z(), u4};
}

double unitary_error_basis_residual(const std::vector<CMatrix>& us) {
  double r = 0;
  const double d = double(us.at(0).rows());
  for (std::size_t x = 0; x < us.size(); ++x)
    for (std::size_t y = 0; y < us.size(); ++y)
      r = std::max(r, std::abs((us[x] * us[y].adjoint()).trace() / d - (x == y ? 1.0 : 0.0)));
  return r;
}

HomModel pauli_hom_model() {
  HomModel m;
  m.dim = 2;
  for (const auto& u : pauli_unitaries())
    for (int a = 0; a < 2; ++a)
      for (int ap = 0; ap < 2; ++ap) m.units.push_back(u.adjoint() * eps(a, ap) * u);
  m.trace = identity(2) / 2.0;
  return m;
}

HomModel conjugate(const HomModel& m, const CMatrix& w) {
  HomModel out = m;
  for (auto& u : out.units) u = w * u * w.adjoint();
  out.trace = w * m.trace * w.adjoint();
  return out;
}

HomModel ampliate(const HomModel& m, Eigen::Index k) {
  HomModel out = m;
  out.dim = m.dim * k;
  for (auto& u : out.units) u = kron(u, identity(k));
  out.trace = kron(m.trace, identity(k)) / double(k);
  return out;
}

std::vector<Residual> hom_relations(const HomModel& m, double tol) {
  double r1 = 0, rsum = 0, rstar = 0, r2 = 0, rtrace = 0;
  const CMatrix id = identity(m.dim);
  for (int x = 0; x < 4; ++x) {
    CMatrix s = CMatrix::Zero(m.dim, m.dim);
    for (int a = 0; a < 2; ++a) {
      s += m.e(x, a, a);
      for (int ap = 0; ap < 2; ++ap) {
        rstar = std::max(rstar, (m.e(x, a, ap).adjoint() - m.e(x, ap, a)).norm());
        for (int bp = 0; bp < 2; ++bp)
          for (int b = 0; b < 2; ++b) {
            CMatrix lhs = m.e(x, a, ap) * m.e(x, bp, b);
            if (ap == bp) lhs -= m.e(x, a, b);
            r1 = std::max(r1, lhs.norm());
          }
      }
    }
    rsum = std::max(rsum, (s - id).norm());
  }
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      if (x == y) continue;
      CMatrix s = CMatrix::Zero(m.dim, m.dim);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) s += m.e(x, a, b) * m.e(y, b, a);
      r2 = std::max(r2, s.norm());
    }
  const std::vector<CMatrix> basis = word_algebra_basis(m.units, m.dim, 8, tol);
  for (const auto& a : basis)
    for (const auto& b : basis) rtrace = std::max(rtrace, std::abs(m.tau(a * b - b * a)));
  return {{"matrix units", r1},
          {"sum of diagonal units - I", rsum},
          {"adjoint of units", rstar},
          {"sum_ab e_{x,a,b} e_{y,b,a}", r2},
          {"trace state not tracial", rtrace}};
}

Verdict validate(const HomModel& m, double tol) {
  if (m.dim < 1 || m.units.size() != 16) return Verdict::violation("needs 16 units", 0.0);
  for (const auto& u : m.units)
    if (u.rows() != m.dim || u.cols() != m.dim || !u.allFinite())
      return Verdict::violation("unit dimension mismatch", 0.0);
  if (m.trace.rows() != m.dim || m.trace.cols() != m.dim)
    return Verdict::violation("trace state dimension mismatch", 0.0);
  const double hr = hermitian_residual(m.trace);
  if (hr > tol) return Verdict::violation("trace state is not Hermitian", hr);
  const double me = min_eigenvalue((m.trace + m.trace.adjoint()) / 2.0, tol);
  if (me < -tol) return Verdict::violation("trace state is not positive", -me);
  const double tr = std::abs(m.trace.trace() - 1.0);
  if (tr > tol) return Verdict::violation("trace state does not have unit trace", tr);
  for (const auto& r : hom_relations(m, tol))
    if (r.value > tol * std::max<double>(1.0, double(m.dim))) return Verdict::violation(r.name, r.value);
  return Verdict::ok();
}

CqnsCorrelation gamma_correlation(const HomModel& m, double tol) {
  if (Verdict v = validate(m, tol); !v)
    throw ValidationError("gamma_correlation: " + v.description, v.magnitude);
  CqnsCorrelation g;
  g.nX = g.nY = 4;
  g.nA = g.nB = 2;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      CMatrix blk(4, 4);
      for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap)
          for (int b = 0; b < 2; ++b)
            for (int bp = 0; bp < 2; ++bp)
              blk(a * 2 + b, ap * 2 + bp) = m.tau(m.e(x, a, ap) * m.e(y, bp, b));
      g.blocks.push_back(blk);
    }
  return g;
}

PerfectReport verify_perfect(const CqnsCorrelation& g, int d, double tol) {
  if (g.nA != d || g.nB != d || g.nX != g.nY)
    throw DimensionMismatch("verify_perfect: outputs must be d-dimensional on both sides");
  if (Verdict v = validate(g, tol); !v)
    throw ValidationError("verify_perfect: " + v.description, v.magnitude);
  const CVector omega = max_entangled(d);
  const CMatrix j = omega * omega.adjoint();
  PerfectReport rep;
  for (int x = 0; x < g.nX; ++x)
    for (int y = 0; y < g.nY; ++y) {
      std::ostringstream name;
      name << "(" << x << "," << y << ")";
      if (x == y) {
        const double r = (g.block(x, y) - j).norm();
        rep.diagonalResidual = std::max(rep.diagonalResidual, r);
        rep.residuals.push_back({name.str(), r});
      } else {
        const double r = std::abs((g.block(x, y) * j).trace());
        rep.offDiagonalResidual = std::max(rep.offDiagonalResidual, r);
        rep.residuals.push_back({name.str(), r});
      }
    }
  rep.verdict = rep.diagonalResidual <= tol && rep.offDiagonalResidual <= tol;
  return rep;
}

PauliForm extract_pauli_form(const HomModel& m, double tol, std::uint64_t seed) {
  if (Verdict v = validate(m, tol); !v)
    throw ValidationError("extract_pauli_form: " + v.description, v.magnitude);
  const double faithful = min_eigenvalue((m.trace + m.trace.adjoint()) / 2.0, tol);
  if (faithful <= tol) throw ValidationError("extract_pauli_form: trace state is not faithful", faithful);
  const double mismatch =
      [&] {
        const CqnsCorrelation g = gamma_correlation(m, tol);
        const CqnsCorrelation ref = gamma_correlation(pauli_hom_model(), tol);
        double r = 0;
        for (std::size_t i = 0; i < g.blocks.size(); ++i)
          r = std::max(r, (g.blocks[i] - ref.blocks[i]).norm());
        return r;
      }();
  if (mismatch > tol) throw ValidationError("extract_pauli_form: correlation differs from the ideal", mismatch);

  const Eigen::Index n = m.dim;
  const EigenDecomposition eq = herm_eig(m.e(0, 0, 0), tol);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < n; ++i)
    if (eq.values(i) > 0.5) cols.push_back(i);
  const Eigen::Index k = Eigen::Index(cols.size());
  if (2 * k != n) throw ValidationError("extract_pauli_form: unit ranks are unbalanced", double(std::abs(n - 2 * k)));
  CMatrix q(n, k);
  for (Eigen::Index i = 0; i < k; ++i) q.col(i) = eq.vectors.col(cols[std::size_t(i)]);
  // r = sum_i e_i (x) q^* e_{1,1,i}; rho(m) = r m r^*.
  CMatrix r(n, n);
  for (int i = 0; i < 2; ++i) r.middleRows(i * k, k) = q.adjoint() * m.e(0, 0, i);

  PauliForm out;
  out.nDim = k;
  std::vector<CMatrix> g(16);
  for (std::size_t i = 0; i < 16; ++i) g[i] = r * m.units[i] * r.adjoint();
  auto unit = [&](int x, int a, int ap) -> const CMatrix& { return g[std::size_t((x * 2 + a) * 2 + ap)]; };
  double refres = 0;
  for (int a = 0; a < 2; ++a)
    for (int ap = 0; ap < 2; ++ap) refres = std::max(refres, (unit(0, a, ap) - kron(eps(a, ap), identity(k))).norm());
  out.residuals.push_back({"reduction unitary", unitary_residual(r)});
  out.residuals.push_back({"reference units", refres});

  const std::vector<CMatrix> algebra = word_algebra_basis(g, n, 8, tol);
  Rng rng(seed);
  const CMatrix f00 = unit(0, 0, 0);
  const CMatrix top = CMatrix::Identity(n, k);
  out.vx.assign(4, identity(n));
  for (int x = 1; x < 4; ++x) {
    CMatrix w;
    for (int attempt = 0; attempt < 8 && w.size() == 0; ++attempt) {
      CMatrix rr = CMatrix::Zero(n, n);
      for (const auto& b : algebra) rr += rng.cnormal() * b;
      const CMatrix mk = unit(x, 0, 0) * rr * f00 * top;
      Eigen::JacobiSVD<CMatrix> svd(mk, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const RVector& s = svd.singularValues();
      if (s(k - 1) <= 1e-6 * s(0)) continue;
      w = svd.matrixU() * svd.matrixV().adjoint() * top.adjoint();
    }
    if (w.size() == 0) throw NotConverged("extract_pauli_form: partial isometry stayed rank deficient");
    CMatrix vd = CMatrix::Zero(n, n);
    for (int a = 0; a < 2; ++a) vd += unit(x, a, 0) * w * unit(0, 0, a);
    out.vx[std::size_t(x)] = vd.adjoint();
  }
  double vres = 0, ures = 0;
  for (int x = 0; x < 4; ++x) {
    ures = std::max(ures, unitary_residual(out.vx[std::size_t(x)]));
    for (int a = 0; a < 2; ++a)
      for (int ap = 0; ap < 2; ++ap)
        vres = std::max(vres, (out.vx[std::size_t(x)].adjoint() * kron(eps(a, ap), identity(k)) *
                                   out.vx[std::size_t(x)] - unit(x, a, ap)).norm());
  }
  out.residuals.push_back({"intertwiners unitary", ures});
  out.residuals.push_back({"intertwiner relation", vres});

  auto blocks = [&](int x) {
    const CMatrix p = out.vx[std::size_t(x)] * out.vx[0].adjoint();
    return std::array<CMatrix, 4>{p.topLeftCorner(k, k), p.topRightCorner(k, k),
                                  p.bottomLeftCorner(k, k), p.bottomRightCorner(k, k)};
  };
  {
    auto [a, b, c, d] = blocks(2);
    out.residuals.push_back({"V3 V1^* diagonal", std::max({b.norm(), c.norm(), (a + d).norm()})});
  }
  {
    auto [a, b, c, d] = blocks(1);
    out.residuals.push_back({"V2 V1^* antidiagonal", std::max({a.norm(), d.norm(), (b - c).norm()})});
  }
  {
    auto [a, b, c, d] = blocks(3);
    out.residuals.push_back({"V4 V1^* antidiagonal", std::max({a.norm(), d.norm(), (b + c).norm()})});
  }
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      if (x == y) continue;
      const CMatrix p = out.vx[std::size_t(x)] * out.vx[std::size_t(y)].adjoint();
      out.traceResidual = std::max(out.traceResidual, (p.topLeftCorner(k, k) + p.bottomRightCorner(k, k)).norm());
    }
  out.residuals.push_back({"(tr2 (x) id)(Vx Vy^*)", out.traceResidual});

  out.v = out.vx[0] * r;
  const std::vector<CMatrix> us = pauli_unitaries();
  for (int x = 0; x < 4; ++x)
    for (int a = 0; a < 2; ++a)
      for (int ap = 0; ap < 2; ++ap) {
        const CMatrix target = kron(us[std::size_t(x)].adjoint() * eps(a, ap) * us[std::size_t(x)], identity(k));
        out.multimpResidual =
            std::max(out.multimpResidual, (out.v * m.e(x, a, ap) * out.v.adjoint() - target).norm());
      }
  out.residuals.push_back({"V e V^* - U^* eps U (x) I", out.multimpResidual});
  out.verdict = max_value(out.residuals) <= tol * std::max<double>(1.0, double(n));
  return out;
}

Scenario bell_scenario(int nX, int nA) {
  Scenario s;
  s.vertices = nX * nA;
  for (int x = 0; x < nX; ++x) {
    std::vector<int> e;
    for (int a = 0; a < nA; ++a) e.push_back(x * nA + a);
    s.edges.push_back(e);
  }
  return s;
}

Scenario odd_cycle_scenario(int n) {
  Scenario s;
  s.vertices = 2 * n;
  for (int i = 0; i < n; ++i) s.edges.push_back({i, (i + 1) % n, n + i});
  return s;
}

void require_valid(const Scenario& s) {
  std::vector<bool> covered(std::size_t(std::max(0, s.vertices)), false);
  for (const auto& e : s.edges) {
    if (e.empty()) throw ValidationError("scenario: empty edge", 0.0);
    for (int v : e) {
      if (v < 0 || v >= s.vertices) throw DimensionMismatch("scenario: edge vertex out of range");
      covered[std::size_t(v)] = true;
    }
  }
  for (int v = 0; v < s.vertices; ++v)
    if (!covered[std::size_t(v)])
      throw ValidationError("scenario: vertex " + std::to_string(v) + " lies in no edge", 0.0);
}

ScenarioReport scenario_check(const Scenario& s, const std::vector<double>& p, double tol) {
  require_valid(s);
  if (p.size() != std::size_t(s.vertices)) throw DimensionMismatch("scenario_check: assignment size");
  ScenarioReport rep;
  for (double v : p) rep.negativity = std::max(rep.negativity, -v);
  for (const auto& e : s.edges) {
    double sum = 0;
    for (int v : e) sum += p[std::size_t(v)];
    rep.edgeResiduals.push_back(std::abs(sum - 1.0));
    rep.normalizationResidual = std::max(rep.normalizationResidual, std::abs(sum - 1.0));
  }
  rep.verdict = rep.normalizationResidual <= tol && rep.negativity <= tol;
  return rep;
}

ScenarioReport scenario_check(const Scenario& g, const Scenario& h, const std::vector<double>& p,
                              double tol) {
  require_valid(g);
  require_valid(h);
  const std::size_t nw = std::size_t(h.vertices);
  if (p.size() != std::size_t(g.vertices) * nw) throw DimensionMismatch("scenario_check: joint assignment size");
  ScenarioReport rep;
  for (double v : p) rep.negativity = std::max(rep.negativity, -v);
  auto at = [&](int v, int w) { return p[std::size_t(v) * nw + std::size_t(w)]; };
  for (const auto& e : g.edges)
    for (const auto& f : h.edges) {
      double sum = 0;
      for (int v : e)
        for (int w : f) sum += at(v, w);
      rep.edgeResiduals.push_back(std::abs(sum - 1.0));
      rep.normalizationResidual = std::max(rep.normalizationResidual, std::abs(sum - 1.0));
    }
  for (int w = 0; w < h.vertices; ++w) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& e : g.edges) {
      double sum = 0;
      for (int v : e) sum += at(v, w);
      lo = std::min(lo, sum);
      hi = std::max(hi, sum);
    }
    rep.nsResidualA = std::max(rep.nsResidualA, hi - lo);
  }
  for (int v = 0; v < g.vertices; ++v) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& f : h.edges) {
      double sum = 0;
      for (int w : f) sum += at(v, w);
      lo = std::min(lo, sum);
      hi = std::max(hi, sum);
    }
    rep.nsResidualB = std::max(rep.nsResidualB, hi - lo);
  }
  rep.verdict = rep.normalizationResidual <= tol && rep.negativity <= tol && rep.nsResidualA <= tol &&
                rep.nsResidualB <= tol;
  return rep;
}

std::vector<double> bell_assignment(const NsCorrelation& p) {
  std::vector<double> out(p.p.size());
  const std::size_t nw = std::size_t(p.nY) * p.nB;
  for (int x = 0; x < p.nX; ++x)
    for (int y = 0; y < p.nY; ++y)
      for (int a = 0; a < p.nA; ++a)
        for (int b = 0; b < p.nB; ++b)
          out[std::size_t(x * p.nA + a) * nw + std::size_t(y * p.nB + b)] = p.at(x, y, a, b);
  return out;
}

}  // namespace selftest
