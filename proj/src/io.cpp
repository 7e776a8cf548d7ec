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

#include "selftest/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#ifndef SELFTEST_VERSION
#define SELFTEST_VERSION "0.0.0"
#endif

namespace selftest {

std::string library_version() { return SELFTEST_VERSION; }

static double finite(double v) {
  if (!std::isfinite(v)) throw Error("json: NaN and Inf are not representable");
  return v;
}

Json to_json(cplx z) { return Json::array({finite(z.real()), finite(z.imag())}); }

Json to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Json to_json(const MeasurementFamily& f) {
  Json j;
  j["kind"] = to_string(f.kind);
  j["X"] = f.nX;
  j["A"] = f.nA;
  Json blocks = Json::array();
  for (const auto& b : f.blocks) blocks.push_back(to_json(b));
  j["blocks"] = std::move(blocks);
  return j;
}

Json to_json(const Model& m) {
  Json j;
  if (m.flavor == Flavor::TensorSplit) {
    j["flavor"] = "tensor";
    j["dims"] = {m.dimA, m.dimB};
  } else {
    j["flavor"] = "commuting";
    j["dims"] = {m.dimA};
  }
  j["alice"] = to_json(m.alice);
  j["bob"] = to_json(m.bob);
  j["state"] = to_json(m.state);
  return j;
}

Json to_json(const NsCorrelation& p) {
  Json j;
  j["kind"] = "ns";
  j["shape"] = {p.nX, p.nY, p.nA, p.nB};
  Json t = Json::array();
  for (int x = 0; x < p.nX; ++x) {
    Json tx = Json::array();
    for (int y = 0; y < p.nY; ++y) {
      Json ty = Json::array();
      for (int a = 0; a < p.nA; ++a) {
        Json ta = Json::array();
        for (int b = 0; b < p.nB; ++b) ta.push_back(finite(p.at(x, y, a, b)));
        ty.push_back(std::move(ta));
      }
      tx.push_back(std::move(ty));
    }
    t.push_back(std::move(tx));
  }
  j["table"] = std::move(t);
  j["synchronous"] = p.synchronous;
  return j;
}

Json to_json(const QnsCorrelation& g) {
  Json j;
  j["kind"] = "qns";
  j["shape"] = {g.nX, g.nY, g.nA, g.nB};
  j["table"] = to_json(g.choi);
  return j;
}

Json to_json(const CqnsCorrelation& g) {
  Json j;
  j["kind"] = "cqns";
  j["shape"] = {g.nX, g.nY, g.nA, g.nB};
  Json t = Json::array();
  for (const auto& b : g.blocks) t.push_back(to_json(b));
  j["table"] = std::move(t);
  return j;
}

Json to_json(const std::vector<Residual>& rs) {
  Json j = Json::object();
  for (const auto& r : rs) j[r.name] = finite(r.value);
  return j;
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "." + key, "missing field");
  return *it;
}

double real_from_json(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(path, "non-finite number");
  return v;
}

int int_from_json(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<int>();
}

static const Json& array_of(const Json& j, const std::string& path, std::size_t n = 0) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  if (n && j.size() != n)
    throw SchemaError(path, "expected " + std::to_string(n) + " entries, found " +
                                std::to_string(j.size()));
  return j;
}

cplx complex_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw SchemaError(path, "expected [re, im] pair");
  return {real_from_json(j[0], path + "[0]"), real_from_json(j[1], path + "[1]")};
}

CMatrix matrix_from_json(const Json& j, const std::string& path) {
  array_of(j, path);
  if (j.empty()) throw SchemaError(path, "matrix has no rows");
  const std::size_t cols = array_of(j[0], path + "[0]").size();
  CMatrix m(Eigen::Index(j.size()), Eigen::Index(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string pi = path + "[" + std::to_string(i) + "]";
    array_of(j[i], pi, cols);
    for (std::size_t k = 0; k < cols; ++k)
      m(Eigen::Index(i), Eigen::Index(k)) = complex_from_json(j[i][k], pi + "[" + std::to_string(k) + "]");
  }
  return m;
}

CVector vector_from_json(const Json& j, const std::string& path) {
  array_of(j, path);
  CVector v(Eigen::Index(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(Eigen::Index(i)) = complex_from_json(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

static FamilyKind kind_from_json(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  const std::string k = j.get<std::string>();
  if (k == "povm") return FamilyKind::POVM;
  if (k == "pvm") return FamilyKind::PVM;
  if (k == "som") return FamilyKind::SOM;
  if (k == "usom") return FamilyKind::USOM;
  throw SchemaError(path, "unknown kind '" + k + "'");
}

MeasurementFamily parse_family(const Json& j, const std::string& path) {
  const FamilyKind kind = kind_from_json(field(j, "kind", path), path + ".kind");
  const int nX = int_from_json(field(j, "X", path), path + ".X");
  const int nA = int_from_json(field(j, "A", path), path + ".A");
  if (nX <= 0) throw SchemaError(path + ".X", "must be positive");
  if (nA <= 0) throw SchemaError(path + ".A", "must be positive");
  const bool som = kind == FamilyKind::SOM || kind == FamilyKind::USOM;
  const std::size_t expected = som ? std::size_t(nX) * nX * nA * nA : std::size_t(nX) * nA;
  const Json& bj = array_of(field(j, "blocks", path), path + ".blocks", expected);
  std::vector<CMatrix> blocks;
  for (std::size_t i = 0; i < bj.size(); ++i) {
    const std::string pi = path + ".blocks[" + std::to_string(i) + "]";
    blocks.push_back(matrix_from_json(bj[i], pi));
    if (blocks.back().rows() != blocks.back().cols() || blocks.back().rows() != blocks.front().rows())
      throw SchemaError(pi, "blocks must be square and of equal size");
  }
  return som ? MeasurementFamily::som_family(kind, nX, nA, std::move(blocks))
             : MeasurementFamily::povm_family(kind, nX, nA, std::move(blocks));
}

Model parse_model(const Json& j, double tol) {
  const Json& fj = field(j, "flavor", "$");
  if (!fj.is_string()) throw SchemaError("$.flavor", "expected a string");
  const std::string flavor = fj.get<std::string>();
  if (flavor != "tensor" && flavor != "commuting")
    throw SchemaError("$.flavor", "expected 'tensor' or 'commuting'");
  const Json& dj = array_of(field(j, "dims", "$"), "$.dims", flavor == "tensor" ? 2 : 1);
  std::vector<int> dims;
  for (std::size_t i = 0; i < dj.size(); ++i) {
    dims.push_back(int_from_json(dj[i], "$.dims[" + std::to_string(i) + "]"));
    if (dims.back() <= 0) throw SchemaError("$.dims[" + std::to_string(i) + "]", "must be positive");
  }
  MeasurementFamily alice = parse_family(field(j, "alice", "$"), "$.alice");
  MeasurementFamily bob = parse_family(field(j, "bob", "$"), "$.bob");
  CVector state = vector_from_json(field(j, "state", "$"), "$.state");
  if (alice.h != dims[0]) throw SchemaError("$.alice.blocks", "block size differs from dims[0]");
  const Eigen::Index bobDim = flavor == "tensor" ? dims[1] : dims[0];
  if (bob.h != bobDim) throw SchemaError("$.bob.blocks", "block size differs from the Bob dimension");
  const Eigen::Index total = flavor == "tensor" ? Eigen::Index(dims[0]) * dims[1] : dims[0];
  if (state.size() != total)
    throw SchemaError("$.state", "expected " + std::to_string(total) + " entries");
  Model m = flavor == "tensor" ? Model::tensor(std::move(alice), std::move(bob), std::move(state))
                               : Model::commuting(dims[0], std::move(alice), std::move(bob), std::move(state));
  require_valid(m, tol, "model");
  return m;
}

Model parse_model(std::string_view text, double tol) { return parse_model(parse_text(text), tol); }

AnyCorrelation parse_correlation(const Json& j, double tol) {
  AnyCorrelation c;
  const Json& kj = field(j, "kind", "$");
  if (!kj.is_string()) throw SchemaError("$.kind", "expected a string");
  c.kind = kj.get<std::string>();
  const Json& sj = array_of(field(j, "shape", "$"), "$.shape", 4);
  int s[4];
  for (int i = 0; i < 4; ++i) {
    s[i] = int_from_json(sj[std::size_t(i)], "$.shape[" + std::to_string(i) + "]");
    if (s[i] <= 0) throw SchemaError("$.shape[" + std::to_string(i) + "]", "must be positive");
  }
  const Json& t = field(j, "table", "$");
  Verdict v;
  if (c.kind == "ns") {
    c.ns = NsCorrelation::zeros(s[0], s[1], s[2], s[3]);
    array_of(t, "$.table", std::size_t(s[0]));
    for (int x = 0; x < s[0]; ++x) {
      const std::string px = "$.table[" + std::to_string(x) + "]";
      array_of(t[std::size_t(x)], px, std::size_t(s[1]));
      for (int y = 0; y < s[1]; ++y) {
        const std::string py = px + "[" + std::to_string(y) + "]";
        array_of(t[std::size_t(x)][std::size_t(y)], py, std::size_t(s[2]));
        for (int a = 0; a < s[2]; ++a) {
          const std::string pa = py + "[" + std::to_string(a) + "]";
          const Json& ta = array_of(t[std::size_t(x)][std::size_t(y)][std::size_t(a)], pa, std::size_t(s[3]));
          for (int b = 0; b < s[3]; ++b)
            c.ns.at(x, y, a, b) = real_from_json(ta[std::size_t(b)], pa + "[" + std::to_string(b) + "]");
        }
      }
    }
    if (auto it = j.find("synchronous"); it != j.end() && it->is_boolean()) c.ns.synchronous = it->get<bool>();
    v = validate(c.ns, tol);
  } else if (c.kind == "qns") {
    c.qns = {s[0], s[1], s[2], s[3], matrix_from_json(t, "$.table")};
    const Eigen::Index n = Eigen::Index(s[0]) * s[1] * s[2] * s[3];
    if (c.qns.choi.rows() != n || c.qns.choi.cols() != n)
      throw SchemaError("$.table", "expected a " + std::to_string(n) + " x " + std::to_string(n) + " matrix");
    v = validate(c.qns, tol);
  } else if (c.kind == "cqns") {
    c.cqns = {s[0], s[1], s[2], s[3], {}};
    array_of(t, "$.table", std::size_t(s[0]) * s[1]);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string pi = "$.table[" + std::to_string(i) + "]";
      c.cqns.blocks.push_back(matrix_from_json(t[i], pi));
      if (c.cqns.blocks.back().rows() != s[2] * s[3] || c.cqns.blocks.back().cols() != s[2] * s[3])
        throw SchemaError(pi, "expected an (A*B) x (A*B) matrix");
    }
    v = validate(c.cqns, tol);
  } else {
    throw SchemaError("$.kind", "expected 'ns', 'qns' or 'cqns'");
  }
  if (!v.valid) throw ValidationError("correlation: " + v.description, v.magnitude);
  return c;
}

Json parse_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("$", std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

std::string dump(const Json& j) { return j.dump(2); }

}  // namespace selftest
