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

#include "selftest/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace selftest {

namespace {

std::vector<CMatrix> projections(const std::vector<CMatrix>& u) {
  std::vector<CMatrix> r;
  for (const auto& ux : u) {
    const CMatrix id = identity(ux.rows());
    r.push_back((id + ux) / 2.0);
    r.push_back((id - ux) / 2.0);
  }
  return r;
}

}  // namespace

std::vector<CMatrix> clifford_rep(int n) {
  if (n < 2 || n > 12 || n % 2 != 0)
    throw Error("clifford_rep: n must be even with 2 <= n <= 12, got " + std::to_string(n));
  const int k = n / 2;
  std::vector<CMatrix> out;
  for (int j = 0; j < k; ++j)
    for (const CMatrix& mid : {pauli_x(), pauli_z()}) {
      std::vector<CMatrix> f(std::size_t(j), pauli_y());
      f.push_back(mid);
      f.resize(std::size_t(k), identity(2));
      out.push_back(kron_all(f));
    }
  return out;
}

double quotient_relation_check(const CMatrix& p, const CMatrix& q, double tol) {
  for (const CMatrix* m : {&p, &q}) {
    const double r = std::max(hermitian_residual(*m), (*m * *m - *m).norm());
    if (r > tol * std::max(1.0, m->norm()))
      throw ValidationError("quotient_relation_check: argument is not a projection", r);
  }
  if (p.rows() != q.rows()) throw DimensionMismatch("quotient_relation_check: size mismatch");
  return (4.0 * p * q + 4.0 * q * p - 4.0 * p - 4.0 * q + 2.0 * identity(p.rows())).norm();
}

NsCorrelation clifford_correlation(int n, double tol) {
  const std::vector<CMatrix> r = projections(clifford_rep(n));
  const double d = double(r[0].rows());
  NsCorrelation p = NsCorrelation::zeros(n, n, 2, 2);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          p.at(x, y, a, b) = (r[std::size_t(2 * x + a)] * r[std::size_t(2 * y + b)]).trace().real() / d;
  p.synchronous = true;
  if (Verdict v = validate(p, tol); !v)
    throw ValidationError("clifford_correlation: " + v.description, v.magnitude);
  return p;
}

NsCorrelation clifford_correlation(int n, const CVector& psi, double tol) {
  const std::vector<CMatrix> r = projections(clifford_rep(n));
  const Eigen::Index d = r[0].rows();
  if (psi.size() != d * d) throw DimensionMismatch("clifford_correlation: state size");
  NsCorrelation p = NsCorrelation::zeros(n, n, 2, 2);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          p.at(x, y, a, b) =
              psi.dot(kron(r[std::size_t(2 * x + a)], r[std::size_t(2 * y + b)]) * psi).real();
  p.synchronous = true;
  for (int x = 0; x < n; ++x)
    if (std::abs(p.at(x, x, 0, 1)) > tol || std::abs(p.at(x, x, 1, 0)) > tol) p.synchronous = false;
  if (Verdict v = validate(p, tol); !v)
    throw ValidationError("clifford_correlation: " + v.description, v.magnitude);
  return p;
}

Model clifford_canonical_model(int n) {
  const std::vector<CMatrix> r = projections(clifford_rep(n));
  std::vector<CMatrix> rt;
  for (const auto& m : r) rt.push_back(m.transpose());
  const Eigen::Index d = r[0].rows();
  return Model::tensor(MeasurementFamily::povm_family(FamilyKind::PVM, n, 2, r),
                       MeasurementFamily::povm_family(FamilyKind::PVM, n, 2, rt),
                       max_entangled(d));
}

WitnessKernel witness_kernel(int n, double tol) {
  const std::vector<CMatrix> u = clifford_rep(n);
  const Eigen::Index d = u[0].rows();
  WitnessKernel w;
  w.witness = double(n) * identity(d * d);
  for (const auto& ux : u) w.witness -= kron(ux, ux);
  const EigenDecomposition ed = herm_eig(w.witness, tol);
  w.eigenvalues = ed.values;
  w.minEigenvalue = ed.values(0);
  Eigen::Index k = 0;
  while (k < ed.values.size() && std::abs(ed.values(k)) <= tol * n) ++k;
  w.kernel = ed.vectors.leftCols(k);
  return w;
}

Letter e_letter(int x, int a) { return {false, x, a}; }
Letter f_letter(int y, int b) { return {true, y, b}; }

Word reduce(const Word& w) {
  Word alice, bob;
  for (const auto& l : w) {
    Word& part = l.bob ? bob : alice;
    if (part.empty() || part.back() != l) part.push_back(l);
  }
  alice.insert(alice.end(), bob.begin(), bob.end());
  return alice;
}

Word star(const Word& w) { return Word(w.rbegin(), w.rend()); }

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << "*";
    os << (w[i].bob ? "f" : "e") << "(" << w[i].x << "," << w[i].a << ")";
  }
  return os.str();
}

bool word_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

Eigen::Index MomentMatrix::index_of(const Word& w) const {
  const Word r = reduce(w);
  for (std::size_t i = 0; i < words.size(); ++i)
    if (words[i] == r) return Eigen::Index(i);
  throw Error("moment matrix has no row for word " + to_string(r));
}

cplx MomentMatrix::at(const Word& alpha, const Word& beta) const {
  return m(index_of(alpha), index_of(beta));
}

MomentMatrix moment_matrix(const NsCorrelation& corr, const std::vector<Word>& words_in,
                           const Completion& completion, double tol) {
  if (Verdict v = validate(corr, tol); !v)
    throw ValidationError("moment_matrix: " + v.description, v.magnitude);
  struct Entry {
    cplx value;
    Word source;
  };
  std::map<Word, Entry> known;
  auto put = [&](const Word& w, cplx val) {
    const Word r = reduce(w);
    const Word rs = reduce(star(r));
    for (const auto& [key, v] : {std::pair<Word, cplx>{r, val}, {rs, std::conj(val)}}) {
      auto it = known.find(key);
      if (it == known.end()) {
        known[key] = {v, w};
      } else if (std::abs(it->second.value - v) > tol) {
        throw InconsistentCompletion("moment_matrix: words " + to_string(w) + " and " +
                                         to_string(it->second.source) +
                                         " reduce to the same element with different values",
                                     w, it->second.source);
      }
    }
  };
  put({}, 1.0);
  for (int x = 0; x < corr.nX; ++x)
    for (int a = 0; a < corr.nA; ++a) {
      double s = 0;
      for (int b = 0; b < corr.nB; ++b) s += corr.at(x, 0, a, b);
      put({e_letter(x, a)}, s);
    }
  for (int y = 0; y < corr.nY; ++y)
    for (int b = 0; b < corr.nB; ++b) {
      double s = 0;
      for (int a = 0; a < corr.nA; ++a) s += corr.at(0, y, a, b);
      put({f_letter(y, b)}, s);
    }
  for (int x = 0; x < corr.nX; ++x)
    for (int y = 0; y < corr.nY; ++y)
      for (int a = 0; a < corr.nA; ++a)
        for (int b = 0; b < corr.nB; ++b) put({e_letter(x, a), f_letter(y, b)}, corr.at(x, y, a, b));
  for (const auto& [w, v] : completion) put(w, v);

  MomentMatrix mm;
  for (const auto& w : words_in) {
    Word r = reduce(w);
    if (std::find(mm.words.begin(), mm.words.end(), r) == mm.words.end()) mm.words.push_back(r);
  }
  std::sort(mm.words.begin(), mm.words.end(), word_less);
  const Eigen::Index n = Eigen::Index(mm.words.size());
  mm.m.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Word key = reduce(concat(star(mm.words[std::size_t(j)]), mm.words[std::size_t(i)]));
      auto it = known.find(key);
      if (it == known.end())
        throw Error("moment_matrix: no value for word " + to_string(key));
      mm.m(i, j) = it->second.value;
    }
  mm.minEigenvalue = n ? min_eigenvalue(mm.m, tol) : 0.0;
  mm.psd = mm.minEigenvalue >= -tol * std::max(1.0, mm.m.norm());
  return mm;
}

cplx evaluate_word(const Model& m, const Word& w) {
  if (m.alice.is_som() || m.bob.is_som()) throw Error("evaluate_word: needs POVM families");
  const Word r = reduce(w);
  CVector v = m.state;
  for (auto it = r.rbegin(); it != r.rend(); ++it)
    v = (it->bob ? m.bob_op(m.bob.povm_index(it->x, it->a))
                 : m.alice_op(m.alice.povm_index(it->x, it->a))) * v;
  return m.state.dot(v);
}

Completion completion_from_model(const Model& m, const std::vector<Word>& words) {
  Completion c;
  for (const auto& a : words)
    for (const auto& b : words) {
      Word w = reduce(concat(star(b), a));
      c.emplace_back(w, evaluate_word(m, w));
    }
  return c;
}

std::vector<Word> ac_words(int nX) {
  std::vector<Word> w{{}};
  for (int x = 0; x < nX; ++x) w.push_back({e_letter(x, 0)});
  for (int x = 0; x < nX; ++x)
    for (int y = 0; y < nX; ++y)
      if (x != y) w.push_back({e_letter(x, 0), e_letter(y, 0)});
  return w;
}

std::vector<Word> level1_words(int nX, int nA, int nY, int nB) {
  std::vector<Word> w{{}};
  for (int x = 0; x < nX; ++x)
    for (int a = 0; a < nA; ++a) w.push_back({e_letter(x, a)});
  for (int y = 0; y < nY; ++y)
    for (int b = 0; b < nB; ++b) w.push_back({f_letter(y, b)});
  return w;
}

AcReport check_ac(const MomentMatrix& m, int nX, double tol) {
  AcReport rep;
  for (int x = 0; x < nX; ++x)
    for (int y = x + 1; y < nX; ++y) {
      double r = 0;
      for (auto [s, t] : {std::pair{x, y}, std::pair{y, x}}) {
        const Word es{e_letter(s, 0)}, et{e_letter(t, 0)};
        const Word wst{e_letter(s, 0), e_letter(t, 0)}, wts{e_letter(t, 0), e_letter(s, 0)};
        r = std::max(r, std::abs(m.at(es, et) - m.at(wst, wts) - 0.125));
      }
      rep.pairs.push_back({x, y, r});
      rep.maxResidual = std::max(rep.maxResidual, r);
    }
  rep.verdict = rep.maxResidual <= tol;
  return rep;
}

AcReport ac_check(const Model& m, double tol) {
  const std::vector<Word> words = ac_words(m.alice.nX);
  const MomentMatrix mm =
      moment_matrix(correlation_ns(m, tol), words, completion_from_model(m, words), tol);
  return check_ac(mm, m.alice.nX, tol);
}

Model independent_bits_model(int nX) {
  if (nX < 1 || nX > 10) throw Error("independent_bits_model: nX must lie in [1, 10]");
  const Eigen::Index d = Eigen::Index(1) << nX;
  std::vector<CMatrix> blocks;
  for (int x = 0; x < nX; ++x) {
    std::vector<CMatrix> f(std::size_t(nX), identity(2));
    f[std::size_t(x)] = CMatrix::Zero(2, 2);
    f[std::size_t(x)](0, 0) = 1.0;
    const CMatrix p = kron_all(f);
    blocks.push_back(p);
    blocks.push_back(identity(d) - p);
  }
  MeasurementFamily fam = MeasurementFamily::povm_family(FamilyKind::PVM, nX, 2, blocks);
  return Model::tensor(fam, fam, max_entangled(d));
}

}  // namespace selftest
