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

#include "selftest/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "selftest/random.hpp"

namespace selftest {

namespace {

std::string fmt(const std::string& what, double v) {
  std::ostringstream os;
  os << what << " (residual " << v << ")";
  return os.str();
}

double rel(double tol, double scale) { return tol * std::max(1.0, scale); }

bool is_zero(const CMatrix& m) { return m.cwiseAbs().maxCoeff() == 0.0; }

void append_adjoints(std::vector<CMatrix>& gens) {
  const std::size_t n = gens.size();
  for (std::size_t i = 0; i < n; ++i)
    if (hermitian_residual(gens[i]) > 1e-14 * std::max(1.0, gens[i].norm()))
      gens.push_back(gens[i].adjoint());
}

}  // namespace

double max_value(const std::vector<Residual>& rs) {
  double m = 0.0;
  for (const auto& r : rs) m = std::max(m, r.value);
  return m;
}

const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::POVM: return "povm";
    case FamilyKind::PVM: return "pvm";
    case FamilyKind::SOM: return "som";
    case FamilyKind::USOM: return "usom";
  }
  return "?";
}

MeasurementFamily MeasurementFamily::povm_family(FamilyKind kind, int nX, int nA,
                                                 std::vector<CMatrix> blocks) {
  if (kind != FamilyKind::POVM && kind != FamilyKind::PVM)
    throw Error("povm_family: kind must be POVM or PVM");
  if (blocks.size() != std::size_t(nX) * nA || blocks.empty())
    throw DimensionMismatch("povm_family: expected X*A blocks");
  MeasurementFamily f;
  f.kind = kind;
  f.nX = nX;
  f.nA = nA;
  f.h = blocks.front().rows();
  f.blocks = std::move(blocks);
  return f;
}

MeasurementFamily MeasurementFamily::som_family(FamilyKind kind, int nX, int nA,
                                                std::vector<CMatrix> blocks) {
  if (kind != FamilyKind::SOM && kind != FamilyKind::USOM)
    throw Error("som_family: kind must be SOM or USOM");
  if (blocks.size() != std::size_t(nX) * nX * nA * nA || blocks.empty())
    throw DimensionMismatch("som_family: expected X*X*A*A blocks");
  MeasurementFamily f;
  f.kind = kind;
  f.nX = nX;
  f.nA = nA;
  f.h = blocks.front().rows();
  f.blocks = std::move(blocks);
  return f;
}

CMatrix som_block_matrix(const MeasurementFamily& f) {
  const Eigen::Index h = f.h;
  const Eigen::Index n = Eigen::Index(f.nX) * f.nA * h;
  CMatrix big(n, n);
  for (int x = 0; x < f.nX; ++x)
    for (int xp = 0; xp < f.nX; ++xp)
      for (int a = 0; a < f.nA; ++a)
        for (int ap = 0; ap < f.nA; ++ap)
          big.block((Eigen::Index(x) * f.nA + a) * h, (Eigen::Index(xp) * f.nA + ap) * h,
                    h, h) = f.som(x, xp, a, ap);
  return big;
}

Verdict validate(const MeasurementFamily& f, double tol) {
  if (f.nX < 1 || f.nA < 1 || f.h < 1)
    return Verdict::violation("family has an empty dimension", 0.0);
  const std::size_t expected = f.is_som() ? std::size_t(f.nX) * f.nX * f.nA * f.nA
                                          : std::size_t(f.nX) * f.nA;
  if (f.blocks.size() != expected)
    return Verdict::violation("wrong number of blocks", 0.0);
  for (const auto& b : f.blocks) {
    if (b.rows() != f.h || b.cols() != f.h)
      return Verdict::violation("block dimension mismatch", 0.0);
    if (!b.allFinite()) return Verdict::violation("non-finite block entry", 0.0);
  }
  const CMatrix id = identity(f.h);
  if (!f.is_som()) {
    for (int x = 0; x < f.nX; ++x) {
      CMatrix sum = CMatrix::Zero(f.h, f.h);
      for (int a = 0; a < f.nA; ++a) {
        const CMatrix& e = f.povm(x, a);
        double hr = hermitian_residual(e);
        if (hr > rel(tol, e.norm()))
          return Verdict::violation(fmt("effect is not Hermitian", hr), hr);
        double me = min_eigenvalue((e + e.adjoint()) / 2.0, tol);
        if (me < -rel(tol, e.norm()))
          return Verdict::violation(fmt("effect is not positive", -me), -me);
        if (f.kind == FamilyKind::PVM) {
          double ir = op_norm(e * e - e);
          if (ir > rel(tol, e.norm()))
            return Verdict::violation(fmt("effect is not a projection", ir), ir);
        }
        sum += e;
      }
      double cr = op_norm(sum - id);
      if (cr > tol) return Verdict::violation(fmt("completeness fails", cr), cr);
    }
    return Verdict::ok();
  }
  const CMatrix big = som_block_matrix(f);
  double hr = hermitian_residual(big);
  if (hr > rel(tol, big.norm()))
    return Verdict::violation(fmt("block matrix is not Hermitian", hr), hr);
  double me = min_eigenvalue((big + big.adjoint()) / 2.0, tol);
  if (me < -rel(tol, op_norm(big)))
    return Verdict::violation(fmt("block matrix is not positive", -me), -me);
  for (int x = 0; x < f.nX; ++x)
    for (int xp = 0; xp < f.nX; ++xp) {
      CMatrix sum = CMatrix::Zero(f.h, f.h);
      for (int a = 0; a < f.nA; ++a) sum += f.som(x, xp, a, a);
      if (x == xp) sum -= id;
      double tr = op_norm(sum);
      if (tr > tol) return Verdict::violation(fmt("output trace condition fails", tr), tr);
    }
  if (f.kind == FamilyKind::USOM) {
    if (f.nX != f.nA) return Verdict::violation("unitary family needs X = A", 0.0);
    CMatrix g = gram_factor((big + big.adjoint()) / 2.0, tol);
    if (g.rows() != f.h)
      return Verdict::violation("block matrix rank differs from h", std::abs(double(g.rows() - f.h)));
    const Eigen::Index h = f.h;
    CMatrix u(f.nA * h, f.nX * h);
    for (int a = 0; a < f.nA; ++a)
      for (int x = 0; x < f.nX; ++x)
        u.block(a * h, x * h, h, h) = g.middleCols((Eigen::Index(x) * f.nA + a) * h, h);
    double ur = unitary_residual(u);
    if (ur > rel(tol, u.norm()))
      return Verdict::violation(fmt("no unitary block realization", ur), ur);
  }
  return Verdict::ok();
}

CMatrix Model::alice_op(std::size_t i) const {
  const CMatrix& e = alice.blocks.at(i);
  return flavor == Flavor::TensorSplit ? kron(e, identity(dimB)) : e;
}

CMatrix Model::bob_op(std::size_t i) const {
  const CMatrix& f = bob.blocks.at(i);
  return flavor == Flavor::TensorSplit ? kron(identity(dimA), f) : f;
}

Model Model::tensor(MeasurementFamily alice, MeasurementFamily bob, CVector state) {
  Model m;
  m.flavor = Flavor::TensorSplit;
  m.dimA = alice.h;
  m.dimB = bob.h;
  m.alice = std::move(alice);
  m.bob = std::move(bob);
  m.state = std::move(state);
  return m;
}

Model Model::commuting(Eigen::Index dimH, MeasurementFamily alice,
                       MeasurementFamily bob, CVector state) {
  Model m;
  m.flavor = Flavor::Commuting;
  m.dimA = dimH;
  m.dimB = 1;
  m.alice = std::move(alice);
  m.bob = std::move(bob);
  m.state = std::move(state);
  return m;
}

Verdict validate(const Model& m, double tol) {
  if (m.flavor == Flavor::TensorSplit) {
    if (m.alice.h != m.dimA || m.bob.h != m.dimB)
      return Verdict::violation("family dimension differs from local dimension", 0.0);
  } else if (m.alice.h != m.dimA || m.bob.h != m.dimA) {
    return Verdict::violation("family dimension differs from dimH", 0.0);
  }
  if (m.state.size() != m.dim())
    return Verdict::violation("state dimension mismatch", 0.0);
  if (!m.state.allFinite()) return Verdict::violation("non-finite state entry", 0.0);
  double nr = std::abs(m.state.norm() - 1.0);
  if (nr > tol) return Verdict::violation(fmt("state is not a unit vector", nr), nr);
  if (Verdict v = validate(m.alice, tol); !v)
    return Verdict::violation("alice: " + v.description, v.magnitude);
  if (Verdict v = validate(m.bob, tol); !v)
    return Verdict::violation("bob: " + v.description, v.magnitude);
  if (m.flavor == Flavor::Commuting) {
    for (const auto& e : m.alice.blocks)
      for (const auto& f : m.bob.blocks) {
        double c = (e * f - f * e).norm();
        if (c > tol * std::max(1.0, e.norm() * f.norm()))
          return Verdict::violation(fmt("alice and bob operators do not commute", c), c);
      }
  }
  return Verdict::ok();
}

void require_valid(const Model& m, double tol, const char* what) {
  Verdict v = validate(m, tol);
  if (!v) throw ValidationError(std::string(what) + ": " + v.description, v.magnitude);
}

Model to_commuting(const Model& m) {
  if (m.flavor == Flavor::Commuting) return m;
  Model out = m;
  out.flavor = Flavor::Commuting;
  for (std::size_t i = 0; i < m.alice.blocks.size(); ++i) out.alice.blocks[i] = m.alice_op(i);
  for (std::size_t i = 0; i < m.bob.blocks.size(); ++i) out.bob.blocks[i] = m.bob_op(i);
  out.alice.h = out.bob.h = m.dim();
  out.dimA = m.dim();
  out.dimB = 1;
  return out;
}

NsCorrelation NsCorrelation::zeros(int nX, int nY, int nA, int nB) {
  NsCorrelation p;
  p.nX = nX;
  p.nY = nY;
  p.nA = nA;
  p.nB = nB;
  p.p.assign(std::size_t(nX) * nY * nA * nB, 0.0);
  return p;
}

CMatrix QnsCorrelation::output(int x, int xp, int y, int yp) const {
  CMatrix out(Eigen::Index(nA) * nB, Eigen::Index(nA) * nB);
  for (int a = 0; a < nA; ++a)
    for (int b = 0; b < nB; ++b)
      for (int ap = 0; ap < nA; ++ap)
        for (int bp = 0; bp < nB; ++bp)
          out(a * nB + b, ap * nB + bp) = entry(x, xp, y, yp, a, ap, b, bp);
  return out;
}

namespace {

bool is_synchronous(const NsCorrelation& p, double tol) {
  if (p.nX != p.nY || p.nA != p.nB) return false;
  for (int x = 0; x < p.nX; ++x)
    for (int a = 0; a < p.nA; ++a)
      for (int b = 0; b < p.nB; ++b)
        if (a != b && std::abs(p.at(x, x, a, b)) > tol) return false;
  return true;
}

}  // namespace

Verdict validate(const NsCorrelation& p, double tol) {
  if (p.p.size() != std::size_t(p.nX) * p.nY * p.nA * p.nB || p.p.empty())
    return Verdict::violation("table size mismatch", 0.0);
  double worst = 0.0;
  for (double v : p.p) {
    if (!std::isfinite(v)) return Verdict::violation("non-finite entry", 0.0);
    worst = std::max(worst, -v);
  }
  if (worst > tol) return Verdict::violation(fmt("negative probability", worst), worst);
  for (int x = 0; x < p.nX; ++x)
    for (int y = 0; y < p.nY; ++y) {
      double s = 0;
      for (int a = 0; a < p.nA; ++a)
        for (int b = 0; b < p.nB; ++b) s += p.at(x, y, a, b);
      if (std::abs(s - 1) > tol)
        return Verdict::violation(fmt("normalization fails", std::abs(s - 1)), std::abs(s - 1));
    }
  for (int x = 0; x < p.nX; ++x)
    for (int a = 0; a < p.nA; ++a) {
      double ref = 0;
      for (int b = 0; b < p.nB; ++b) ref += p.at(x, 0, a, b);
      for (int y = 1; y < p.nY; ++y) {
        double s = 0;
        for (int b = 0; b < p.nB; ++b) s += p.at(x, y, a, b);
        if (std::abs(s - ref) > tol)
          return Verdict::violation(fmt("alice marginal depends on y", std::abs(s - ref)),
                                    std::abs(s - ref));
      }
    }
  for (int y = 0; y < p.nY; ++y)
    for (int b = 0; b < p.nB; ++b) {
      double ref = 0;
      for (int a = 0; a < p.nA; ++a) ref += p.at(0, y, a, b);
      for (int x = 1; x < p.nX; ++x) {
        double s = 0;
        for (int a = 0; a < p.nA; ++a) s += p.at(x, y, a, b);
        if (std::abs(s - ref) > tol)
          return Verdict::violation(fmt("bob marginal depends on x", std::abs(s - ref)),
                                    std::abs(s - ref));
      }
    }
  if (p.synchronous && !is_synchronous(p, tol))
    return Verdict::violation("flagged synchronous but p(a != b | x, x) > 0", 0.0);
  return Verdict::ok();
}

Verdict validate(const QnsCorrelation& g, double tol) {
  const Eigen::Index n = Eigen::Index(g.nX) * g.nY * g.nA * g.nB;
  if (n == 0 || g.choi.rows() != n || g.choi.cols() != n)
    return Verdict::violation("Choi matrix size mismatch", 0.0);
  if (!g.choi.allFinite()) return Verdict::violation("non-finite entry", 0.0);
  double hr = hermitian_residual(g.choi);
  if (hr > rel(tol, g.choi.norm()))
    return Verdict::violation(fmt("Choi matrix is not Hermitian", hr), hr);
  double me = min_eigenvalue((g.choi + g.choi.adjoint()) / 2.0, tol);
  if (me < -rel(tol, g.choi.norm()))
    return Verdict::violation(fmt("not completely positive", -me), -me);
  double tp = 0, nsa = 0, nsb = 0;
  for (int x = 0; x < g.nX; ++x)
    for (int xp = 0; xp < g.nX; ++xp)
      for (int y = 0; y < g.nY; ++y)
        for (int yp = 0; yp < g.nY; ++yp) {
          cplx t = 0;
          for (int a = 0; a < g.nA; ++a)
            for (int b = 0; b < g.nB; ++b) t += g.entry(x, xp, y, yp, a, a, b, b);
          tp = std::max(tp, std::abs(t - ((x == xp && y == yp) ? 1.0 : 0.0)));
          for (int b = 0; b < g.nB; ++b)
            for (int bp = 0; bp < g.nB; ++bp) {
              cplx s = 0, ref = 0;
              for (int a = 0; a < g.nA; ++a) {
                s += g.entry(x, xp, y, yp, a, a, b, bp);
                ref += g.entry(0, 0, y, yp, a, a, b, bp);
              }
              nsa = std::max(nsa, std::abs(s - (x == xp ? ref : 0.0)));
            }
          for (int a = 0; a < g.nA; ++a)
            for (int ap = 0; ap < g.nA; ++ap) {
              cplx s = 0, ref = 0;
              for (int b = 0; b < g.nB; ++b) {
                s += g.entry(x, xp, y, yp, a, ap, b, b);
                ref += g.entry(x, xp, 0, 0, a, ap, b, b);
              }
              nsb = std::max(nsb, std::abs(s - (y == yp ? ref : 0.0)));
            }
        }
  if (tp > tol) return Verdict::violation(fmt("not trace preserving", tp), tp);
  if (nsa > tol) return Verdict::violation(fmt("alice no-signalling fails", nsa), nsa);
  if (nsb > tol) return Verdict::violation(fmt("bob no-signalling fails", nsb), nsb);
  return Verdict::ok();
}

Verdict validate(const CqnsCorrelation& g, double tol) {
  const Eigen::Index n = Eigen::Index(g.nA) * g.nB;
  if (g.blocks.size() != std::size_t(g.nX) * g.nY || g.blocks.empty())
    return Verdict::violation("block count mismatch", 0.0);
  for (const auto& b : g.blocks) {
    if (b.rows() != n || b.cols() != n) return Verdict::violation("block size mismatch", 0.0);
    double hr = hermitian_residual(b);
    if (hr > rel(tol, b.norm())) return Verdict::violation(fmt("block not Hermitian", hr), hr);
    double me = min_eigenvalue((b + b.adjoint()) / 2.0, tol);
    if (me < -tol) return Verdict::violation(fmt("block not positive", -me), -me);
    double tr = std::abs(b.trace() - 1.0);
    if (tr > tol) return Verdict::violation(fmt("block trace is not 1", tr), tr);
  }
  for (int x = 0; x < g.nX; ++x)
    for (int y = 0; y < g.nY; ++y) {
      double ra = (partial_trace(g.block(x, y), g.nA, g.nB, Side::A) -
                   partial_trace(g.block(0, y), g.nA, g.nB, Side::A)).norm();
      if (ra > tol) return Verdict::violation(fmt("bob marginal depends on x", ra), ra);
      double rb = (partial_trace(g.block(x, y), g.nA, g.nB, Side::B) -
                   partial_trace(g.block(x, 0), g.nA, g.nB, Side::B)).norm();
      if (rb > tol) return Verdict::violation(fmt("alice marginal depends on y", rb), rb);
    }
  return Verdict::ok();
}

NsCorrelation correlation_ns(const Model& m, double tol) {
  require_valid(m, tol, "correlation_ns");
  if (m.alice.is_som() || m.bob.is_som())
    throw Error("correlation_ns: needs POVM or PVM families");
  NsCorrelation p = NsCorrelation::zeros(m.alice.nX, m.bob.nX, m.alice.nA, m.bob.nA);
  std::vector<CVector> fxi(m.bob.blocks.size());
  for (std::size_t j = 0; j < fxi.size(); ++j) fxi[j] = m.bob_op(j) * m.state;
  for (int x = 0; x < p.nX; ++x)
    for (int a = 0; a < p.nA; ++a) {
      CVector exi = m.alice_op(m.alice.povm_index(x, a)).adjoint() * m.state;
      for (int y = 0; y < p.nY; ++y)
        for (int b = 0; b < p.nB; ++b)
          p.at(x, y, a, b) = exi.dot(fxi[m.bob.povm_index(y, b)]).real();
    }
  p.synchronous = is_synchronous(p, tol);
  if (Verdict v = validate(p, 10 * tol); !v)
    throw ValidationError("correlation_ns: " + v.description, v.magnitude);
  return p;
}

QnsCorrelation correlation_qns(const Model& m, double tol) {
  require_valid(m, tol, "correlation_qns");
  if (!m.alice.is_som() || !m.bob.is_som())
    throw Error("correlation_qns: needs SOM families");
  QnsCorrelation g;
  g.nX = m.alice.nX;
  g.nY = m.bob.nX;
  g.nA = m.alice.nA;
  g.nB = m.bob.nA;
  const Eigen::Index n = Eigen::Index(g.nX) * g.nY * g.nA * g.nB;
  g.choi = CMatrix::Zero(n, n);
  std::vector<CVector> fxi(m.bob.blocks.size());
  std::vector<bool> fz(m.bob.blocks.size());
  for (std::size_t j = 0; j < fxi.size(); ++j) {
    fz[j] = is_zero(m.bob.blocks[j]);
    if (!fz[j]) fxi[j] = m.bob_op(j) * m.state;
  }
  for (int x = 0; x < g.nX; ++x)
    for (int xp = 0; xp < g.nX; ++xp)
      for (int a = 0; a < g.nA; ++a)
        for (int ap = 0; ap < g.nA; ++ap) {
          const std::size_t i = m.alice.som_index(x, xp, a, ap);
          if (is_zero(m.alice.blocks[i])) continue;
          CVector exi = m.alice_op(i).adjoint() * m.state;
          for (int y = 0; y < g.nY; ++y)
            for (int yp = 0; yp < g.nY; ++yp)
              for (int b = 0; b < g.nB; ++b)
                for (int bp = 0; bp < g.nB; ++bp) {
                  const std::size_t j = m.bob.som_index(y, yp, b, bp);
                  if (fz[j]) continue;
                  g.choi(g.index(x, y, a, b), g.index(xp, yp, ap, bp)) = exi.dot(fxi[j]);
                }
        }
  if (Verdict v = validate(g, 10 * tol); !v)
    throw ValidationError("correlation_qns: " + v.description, v.magnitude);
  return g;
}

QnsCorrelation lift_classical(const NsCorrelation& p) {
  QnsCorrelation g;
  g.nX = p.nX;
  g.nY = p.nY;
  g.nA = p.nA;
  g.nB = p.nB;
  const Eigen::Index n = Eigen::Index(g.nX) * g.nY * g.nA * g.nB;
  g.choi = CMatrix::Zero(n, n);
  for (int x = 0; x < p.nX; ++x)
    for (int y = 0; y < p.nY; ++y)
      for (int a = 0; a < p.nA; ++a)
        for (int b = 0; b < p.nB; ++b) {
          Eigen::Index k = g.index(x, y, a, b);
          g.choi(k, k) = p.at(x, y, a, b);
        }
  return g;
}

CqnsCorrelation classical_inputs(const QnsCorrelation& g) {
  CqnsCorrelation c;
  c.nX = g.nX;
  c.nY = g.nY;
  c.nA = g.nA;
  c.nB = g.nB;
  for (int x = 0; x < g.nX; ++x)
    for (int y = 0; y < g.nY; ++y) c.blocks.push_back(g.output(x, x, y, y));
  return c;
}

double max_abs_diff(const NsCorrelation& p, const NsCorrelation& q) {
  if (p.p.size() != q.p.size() || p.nX != q.nX || p.nA != q.nA || p.nY != q.nY)
    return INFINITY;
  double d = 0;
  for (std::size_t i = 0; i < p.p.size(); ++i) d = std::max(d, std::abs(p.p[i] - q.p[i]));
  return d;
}

double max_abs_diff(const QnsCorrelation& p, const QnsCorrelation& q) {
  if (p.choi.rows() != q.choi.rows() || p.nX != q.nX || p.nA != q.nA || p.nY != q.nY)
    return INFINITY;
  return (p.choi - q.choi).cwiseAbs().maxCoeff();
}

NsCorrelation weighted_sum(const std::vector<double>& w,
                           const std::vector<NsCorrelation>& ps) {
  if (ps.empty() || w.size() != ps.size()) throw DimensionMismatch("weighted_sum");
  NsCorrelation out = NsCorrelation::zeros(ps[0].nX, ps[0].nY, ps[0].nA, ps[0].nB);
  for (std::size_t k = 0; k < ps.size(); ++k)
    for (std::size_t i = 0; i < out.p.size(); ++i) out.p[i] += w[k] * ps[k].p.at(i);
  return out;
}

std::vector<CMatrix> word_algebra_basis(const std::vector<CMatrix>& gens_in,
                                        Eigen::Index dim, int maxWordLen, double tol) {
  std::vector<CMatrix> gens = gens_in;
  append_adjoints(gens);
  const Eigen::Index d2 = dim * dim;
  CMatrix basis(d2, 0);
  std::vector<CMatrix> out;
  // ref bounds the norm of c, so products that vanish up to rounding are rejected.
  auto add = [&](const CMatrix& c, double ref) {
    CVector v = Eigen::Map<const CVector>(c.data(), d2);
    if (v.norm() == 0.0) return false;
    if (basis.cols()) v -= basis * (basis.adjoint() * v);
    if (basis.cols()) v -= basis * (basis.adjoint() * v);
    if (v.norm() <= std::max(tol, 1e-12) * ref * 10) return false;
    v /= v.norm();
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = v;
    out.push_back(Eigen::Map<CMatrix>(v.data(), dim, dim));
    return true;
  };
  add(identity(dim), std::sqrt(double(dim)));
  std::vector<CMatrix> frontier = out;
  for (int len = 1; len <= maxWordLen + 1; ++len) {
    std::vector<CMatrix> next;
    for (const auto& w : frontier)
      for (const auto& g : gens)
        if (add(g * w, g.norm())) next.push_back(out.back());
    if (next.empty() || basis.cols() == d2) return out;
    if (len > maxWordLen)
      throw NotConverged("word algebra still growing at word length " +
                         std::to_string(maxWordLen));
    frontier = std::move(next);
  }
  return out;
}

std::vector<CMatrix> alice_generators(const Model& m) {
  std::vector<CMatrix> g;
  for (std::size_t i = 0; i < m.alice.blocks.size(); ++i)
    if (!is_zero(m.alice.blocks[i])) g.push_back(m.alice_op(i));
  return g;
}

std::vector<CMatrix> bob_generators(const Model& m) {
  std::vector<CMatrix> g;
  for (std::size_t i = 0; i < m.bob.blocks.size(); ++i)
    if (!is_zero(m.bob.blocks[i])) g.push_back(m.bob_op(i));
  return g;
}

namespace {

CMatrix support_projection(const std::vector<CMatrix>& gens, const CVector& xi,
                           double tol) {
  const Eigen::Index d = xi.size();
  std::vector<CMatrix> comm = commutant_basis(gens, d, tol);
  CMatrix vecs(d, Eigen::Index(comm.size()));
  for (std::size_t k = 0; k < comm.size(); ++k) vecs.col(Eigen::Index(k)) = comm[k] * xi;
  CMatrix q = orthonormal_span(vecs, tol);
  return q * q.adjoint();
}

MeasurementFamily compress(const MeasurementFamily& f, const CMatrix& q, double tol) {
  MeasurementFamily out = f;
  out.h = q.cols();
  for (auto& b : out.blocks) b = q.adjoint() * b * q;
  if (out.kind == FamilyKind::PVM || out.kind == FamilyKind::USOM) {
    if (!validate(out, tol))
      out.kind = out.kind == FamilyKind::PVM ? FamilyKind::POVM : FamilyKind::SOM;
  }
  return out;
}

}  // namespace

SupportData support_data(const Model& m, int maxWordLen, double tol) {
  require_valid(m, tol, "support_data");
  const Model mc = to_commuting(m);
  const Eigen::Index d = mc.dim();
  const std::vector<CMatrix> ga = alice_generators(mc);
  const std::vector<CMatrix> gb = bob_generators(mc);
  SupportData s;
  s.algebraDimA = Eigen::Index(word_algebra_basis(ga, d, maxWordLen, tol).size());
  s.algebraDimB = Eigen::Index(word_algebra_basis(gb, d, maxWordLen, tol).size());
  s.epsA = support_projection(ga, mc.state, tol);
  s.epsB = support_projection(gb, mc.state, tol);
  const CMatrix id = identity(d);
  s.fullRank = (s.epsA - id).norm() <= tol * d && (s.epsB - id).norm() <= tol * d;
  double central = 0;
  for (const auto& g : ga) central = std::max(central, (s.epsA * g - g * s.epsA).norm());
  for (const auto& g : gb) central = std::max(central, (s.epsB * g - g * s.epsB).norm());
  s.centrallySupported = central <= tol * d;
  if (s.fullRank) {
    s.reduced = m;
    return s;
  }
  const CMatrix r = s.epsA * s.epsB;
  const CMatrix q = orthonormal_span(r, 1e-6);
  s.reduced = Model::commuting(q.cols(), compress(mc.alice, q, tol),
                               compress(mc.bob, q, tol), q.adjoint() * mc.state);
  return s;
}

namespace {

// Groups ascending eigenvalues into clusters separated by more than gap.
std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters(const RVector& v, double gap) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  Eigen::Index s = 0;
  for (Eigen::Index i = 1; i <= v.size(); ++i)
    if (i == v.size() || v(i) - v(i - 1) > gap) {
      out.emplace_back(s, i);
      s = i;
    }
  return out;
}

CMatrix random_combination(const std::vector<CMatrix>& basis, Rng& rng) {
  CMatrix c = CMatrix::Zero(basis[0].rows(), basis[0].cols());
  for (const auto& b : basis) c += rng.cnormal() * b;
  return c;
}

bool try_decompose(const std::vector<CMatrix>& gens, const std::vector<CMatrix>& comm,
                   const std::vector<CMatrix>& center, Eigen::Index dim, double tol,
                   Rng& rng, std::vector<AlgebraBlock>& out) {
  out.clear();
  CMatrix z = random_combination(center, rng);
  z = ((z + z.adjoint()) / 2.0).eval();
  EigenDecomposition ez = herm_eig(z, 1e-8);
  const double zs = std::max(1e-300, ez.values.cwiseAbs().maxCoeff());
  for (auto [s, e] : clusters(ez.values, 1e-6 * zs)) {
    const CMatrix q = ez.vectors.middleCols(s, e - s);
    const Eigen::Index mi = e - s;
    std::vector<CMatrix> cc;
    CMatrix vecs(mi * mi, Eigen::Index(comm.size()));
    for (std::size_t k = 0; k < comm.size(); ++k) {
      cc.push_back(q.adjoint() * comm[k] * q);
      vecs.col(Eigen::Index(k)) = Eigen::Map<const CVector>(cc.back().data(), mi * mi);
    }
    const Eigen::Index cdim = numerical_rank(vecs, 1e-8);
    CMatrix hk = random_combination(cc, rng);
    hk = ((hk + hk.adjoint()) / 2.0).eval();
    EigenDecomposition eh = herm_eig(hk, 1e-8);
    const double hs = std::max(1e-300, eh.values.cwiseAbs().maxCoeff());
    auto cl = clusters(eh.values, 1e-6 * hs);
    const Eigen::Index copies = Eigen::Index(cl.size());
    const Eigen::Index n = mi / copies;
    if (n * copies != mi || copies * copies != cdim) return false;
    for (auto [s2, e2] : cl)
      if (e2 - s2 != n) return false;
    std::vector<CMatrix> t(static_cast<std::size_t>(copies));
    const CMatrix s1 = eh.vectors.middleCols(cl[0].first, n);
    t[0] = s1;
    CMatrix c2 = random_combination(cc, rng);
    for (Eigen::Index j = 1; j < copies; ++j) {
      const CMatrix sj = eh.vectors.middleCols(cl[std::size_t(j)].first, n);
      t[std::size_t(j)] = sj * (sj.adjoint() * c2 * s1);
      Eigen::JacobiSVD<CMatrix> svd(t[std::size_t(j)], Eigen::ComputeThinU | Eigen::ComputeThinV);
      if (svd.singularValues()(n - 1) < 1e-8 * svd.singularValues()(0)) return false;
      t[std::size_t(j)] = svd.matrixU() * svd.matrixV().adjoint();
    }
    CMatrix local(mi, mi);
    for (Eigen::Index k = 0; k < n; ++k)
      for (Eigen::Index j = 0; j < copies; ++j) local.col(k * copies + j) = t[std::size_t(j)].col(k);
    AlgebraBlock blk;
    blk.basis = q * local;
    blk.irrepDim = n;
    blk.copies = copies;
    out.push_back(std::move(blk));
  }
  Eigen::Index total = 0;
  for (const auto& b : out) total += b.basis.cols();
  if (total != dim) return false;
  for (const auto& b : out) {
    for (const auto& g : gens) {
      CMatrix c = b.basis.adjoint() * g * b.basis;
      CMatrix pi(b.irrepDim, b.irrepDim);
      for (Eigen::Index r = 0; r < b.irrepDim; ++r)
        for (Eigen::Index s = 0; s < b.irrepDim; ++s) pi(r, s) = c(r * b.copies, s * b.copies);
      if ((c - kron(pi, identity(b.copies))).norm() > 1e3 * tol * std::max(1.0, g.norm()))
        return false;
    }
  }
  return true;
}

}  // namespace

std::vector<AlgebraBlock> decompose_algebra(const std::vector<CMatrix>& gens_in,
                                            Eigen::Index dim, double tol,
                                            std::uint64_t seed) {
  std::vector<CMatrix> gens = gens_in;
  append_adjoints(gens);
  std::vector<CMatrix> comm = commutant_basis(gens, dim, tol);
  std::vector<CMatrix> both = gens;
  both.insert(both.end(), comm.begin(), comm.end());
  std::vector<CMatrix> center = commutant_basis(both, dim, tol);
  Rng rng(seed);
  std::vector<AlgebraBlock> out;
  for (int attempt = 0; attempt < 8; ++attempt)
    if (try_decompose(gens, comm, center, dim, tol, rng, out)) return out;
  throw NotConverged("decompose_algebra: no consistent block structure after 8 draws");
}

SplitResult split_commuting(const Model& m, double tol, std::uint64_t seed) {
  require_valid(m, tol, "split_commuting");
  const Model mc = to_commuting(m);
  SplitResult res;
  res.blocks = decompose_algebra(alice_generators(mc), mc.dim(), tol, seed);
  for (std::size_t bi = 0; bi < res.blocks.size(); ++bi) {
    const AlgebraBlock& b = res.blocks[bi];
    const Eigen::Index n = b.irrepDim, k = b.copies;
    CVector xi = b.basis.adjoint() * mc.state;
    const double w = xi.squaredNorm();
    MeasurementFamily fa = mc.alice, fb = mc.bob;
    fa.h = n;
    fb.h = k;
    for (std::size_t i = 0; i < fa.blocks.size(); ++i) {
      CMatrix c = b.basis.adjoint() * mc.alice.blocks[i] * b.basis;
      CMatrix pi(n, n);
      for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index s = 0; s < n; ++s) pi(r, s) = c(r * k, s * k);
      res.structureResidual = std::max(res.structureResidual, (c - kron(pi, identity(k))).norm());
      fa.blocks[i] = pi;
    }
    for (std::size_t i = 0; i < fb.blocks.size(); ++i) {
      CMatrix c = b.basis.adjoint() * mc.bob.blocks[i] * b.basis;
      CMatrix rho = c.topLeftCorner(k, k);
      res.structureResidual = std::max(res.structureResidual, (c - kron(identity(n), rho)).norm());
      fb.blocks[i] = rho;
    }
    if (w <= tol) continue;
    SplitComponent comp;
    comp.weight = w;
    comp.block = Eigen::Index(bi);
    comp.model = Model::tensor(std::move(fa), std::move(fb), xi / std::sqrt(w));
    res.components.push_back(std::move(comp));
  }
  std::vector<double> ws;
  for (const auto& c : res.components) ws.push_back(c.weight);
  if (!mc.alice.is_som()) {
    std::vector<NsCorrelation> ps;
    for (const auto& c : res.components) ps.push_back(correlation_ns(c.model, 1e3 * tol));
    res.reassemblyResidual = max_abs_diff(weighted_sum(ws, ps), correlation_ns(mc, tol));
  } else {
    QnsCorrelation total = correlation_qns(mc, tol);
    CMatrix acc = CMatrix::Zero(total.choi.rows(), total.choi.cols());
    for (const auto& c : res.components) acc += c.weight * correlation_qns(c.model, 1e3 * tol).choi;
    res.reassemblyResidual = (acc - total.choi).cwiseAbs().maxCoeff();
  }
  return res;
}

}  // namespace selftest
