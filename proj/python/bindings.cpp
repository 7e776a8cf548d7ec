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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <string_view>

#include "selftest/chsh.hpp"
#include "selftest/clifford.hpp"
#include "selftest/dilation.hpp"
#include "selftest/games.hpp"
#include "selftest/io.hpp"
#include "selftest/schur.hpp"

namespace py = pybind11;
using namespace selftest;

namespace {

FamilyKind kind_from(const std::string& k) {
  if (k == "povm") return FamilyKind::POVM;
  if (k == "pvm") return FamilyKind::PVM;
  if (k == "som") return FamilyKind::SOM;
  if (k == "usom") return FamilyKind::USOM;
  throw Error("unknown family kind '" + k + "'");
}

py::dict verdict_dict(const Verdict& v) {
  py::dict d;
  d["valid"] = v.valid;
  d["description"] = v.description;
  d["magnitude"] = v.magnitude;
  return d;
}

py::dict residual_dict(const std::vector<Residual>& rs) {
  py::dict d;
  for (const auto& r : rs) d[py::str(r.name)] = r.value;
  return d;
}

py::array_t<double> ns_array(const NsCorrelation& p) {
  py::array_t<double> out({p.nX, p.nY, p.nA, p.nB});
  std::copy(p.p.begin(), p.p.end(), out.mutable_data());
  return out;
}

NsCorrelation ns_from(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 4) throw DimensionMismatch("expected an array of shape (X, Y, A, B)");
  NsCorrelation p = NsCorrelation::zeros(int(a.shape(0)), int(a.shape(1)), int(a.shape(2)), int(a.shape(3)));
  std::copy(a.data(), a.data() + a.size(), p.p.begin());
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Self-testing verification for quantum correlation models";
  m.attr("__version__") = library_version();

  // Translators run newest first, so the base class is registered first.
  auto& error = py::register_exception<Error>(m, "SelftestError", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<NotOptimal>(m, "NotOptimal", error.ptr());

  py::class_<MeasurementFamily>(m, "MeasurementFamily")
      .def_property_readonly("kind", [](const MeasurementFamily& f) { return std::string(to_string(f.kind)); })
      .def_readonly("X", &MeasurementFamily::nX)
      .def_readonly("A", &MeasurementFamily::nA)
      .def_readonly("h", &MeasurementFamily::h)
      .def_readonly("blocks", &MeasurementFamily::blocks)
      .def_static("povm", [](const std::string& kind, int x, int a, std::vector<CMatrix> blocks) {
        return MeasurementFamily::povm_family(kind_from(kind), x, a, std::move(blocks));
      }, py::arg("kind"), py::arg("X"), py::arg("A"), py::arg("blocks"))
      .def_static("som", [](const std::string& kind, int x, int a, std::vector<CMatrix> blocks) {
        return MeasurementFamily::som_family(kind_from(kind), x, a, std::move(blocks));
      }, py::arg("kind"), py::arg("X"), py::arg("A"), py::arg("blocks"))
      .def("validate", [](const MeasurementFamily& f, double tol) { return verdict_dict(validate(f, tol)); },
           py::arg("tol") = kDefaultTol)
      .def("to_json", [](const MeasurementFamily& f) { return dump(to_json(f)); });

  py::class_<Model>(m, "Model")
      .def_property_readonly("flavor", [](const Model& x) {
        return std::string(x.flavor == Flavor::TensorSplit ? "tensor" : "commuting");
      })
      .def_readonly("dim_a", &Model::dimA)
      .def_readonly("dim_b", &Model::dimB)
      .def_readonly("alice", &Model::alice)
      .def_readonly("bob", &Model::bob)
      .def_readonly("state", &Model::state)
      .def_static("tensor", &Model::tensor, py::arg("alice"), py::arg("bob"), py::arg("state"))
      .def_static("commuting", &Model::commuting, py::arg("dim"), py::arg("alice"), py::arg("bob"),
                  py::arg("state"))
      .def_static("from_json", [](const std::string& s, double tol) { return parse_model(std::string_view(s), tol); },
                  py::arg("text"), py::arg("tol") = kDefaultTol)
      .def("to_json", [](const Model& x) { return dump(to_json(x)); })
      .def("validate", [](const Model& x, double tol) { return verdict_dict(validate(x, tol)); },
           py::arg("tol") = kDefaultTol);

  m.def("correlation_ns", [](const Model& x, double tol) { return ns_array(correlation_ns(x, tol)); },
        py::arg("model"), py::arg("tol") = kDefaultTol);
  m.def("ampliate", py::overload_cast<const Model&, Eigen::Index, Eigen::Index, const CVector&>(&ampliate),
        py::arg("model"), py::arg("aux_a"), py::arg("aux_b"), py::arg("xi_aux"));

  m.def("chsh_ideal_model", &chsh_ideal_model);
  m.def("chsh_score", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    const ChshScore s = chsh_score(ns_from(a));
    return py::make_tuple(s.winProb, s.bias);
  });
  m.def("swap_selftest", [](const Model& x, double tol) {
    const SwapReport r = swap_selftest(x, tol);
    py::dict d;
    d["verdict"] = r.verdict;
    d["bias"] = r.bias;
    d["max_residual"] = r.dilation.maxResidual;
    d["xi_aux"] = r.xiAux;
    d["residuals"] = residual_dict(r.residuals);
    return d;
  }, py::arg("model"), py::arg("tol") = kDefaultTol);
  m.def("extract_pvm", [](const Model& x, double tol) { return extract_pvm(x, tol); }, py::arg("model"),
        py::arg("tol") = kDefaultTol);
  m.def("counterexample_som", []() {
    const CounterexampleReport r = counterexample_som();
    py::dict d;
    d["verdict"] = r.verdict;
    d["qns_diagonal_residual"] = r.qnsDiagonalResidual;
    d["obstruction"] = r.obstruction;
    d["model"] = r.model;
    return d;
  });

  m.def("clifford_rep", &clifford_rep, py::arg("n"));
  m.def("clifford_canonical_model", &clifford_canonical_model, py::arg("n"));
  m.def("independent_bits_model", &independent_bits_model, py::arg("n"));
  m.def("witness_kernel", [](int n) {
    const WitnessKernel w = witness_kernel(n);
    py::dict d;
    d["eigenvalues"] = w.eigenvalues;
    d["kernel"] = w.kernel;
    d["min_eigenvalue"] = w.minEigenvalue;
    return d;
  }, py::arg("n"));
  m.def("ac_check", [](const Model& x, double tol) {
    const AcReport r = ac_check(x, tol);
    return py::make_tuple(r.verdict, r.maxResidual);
  }, py::arg("model"), py::arg("tol") = kDefaultTol);

  py::class_<HomModel>(m, "HomModel")
      .def_readonly("dim", &HomModel::dim)
      .def_readonly("units", &HomModel::units)
      .def_readonly("trace", &HomModel::trace);
  m.def("pauli_hom_model", &pauli_hom_model);
  m.def("conjugate", py::overload_cast<const HomModel&, const CMatrix&>(&conjugate), py::arg("model"),
        py::arg("unitary"));
  m.def("ampliate_hom", py::overload_cast<const HomModel&, Eigen::Index>(&ampliate), py::arg("model"),
        py::arg("k"));
  m.def("verify_perfect_gamma", [](const HomModel& h, double tol) {
    const PerfectReport r = verify_perfect(gamma_correlation(h, tol), 2, tol);
    return py::make_tuple(r.verdict, std::max(r.diagonalResidual, r.offDiagonalResidual));
  }, py::arg("model"), py::arg("tol") = kDefaultTol);
  m.def("extract_pauli_form", [](const HomModel& h, double tol, std::uint64_t seed) {
    const PauliForm f = extract_pauli_form(h, tol, seed);
    py::dict d;
    d["verdict"] = f.verdict;
    d["n_dim"] = f.nDim;
    d["multimp_residual"] = f.multimpResidual;
    d["v"] = f.v;
    return d;
  }, py::arg("model"), py::arg("tol") = kDefaultTol, py::arg("seed") = 0);

  m.def("random_som", &random_som, py::arg("X"), py::arg("A"), py::arg("h"), py::arg("seed"));
  m.def("usom_dilate", [](const MeasurementFamily& f, double tol) {
    const UsomDilation u = usom_dilate(f, tol);
    py::dict d;
    d["k"] = u.k;
    d["unitary_residual"] = u.unitaryResidual;
    d["reconstruction_residual"] = u.reconstructionResidual;
    d["usom"] = u.usom;
    return d;
  }, py::arg("som"), py::arg("tol") = kDefaultTol);

  py::class_<GroupRep>(m, "GroupRep")
      .def_readonly("mats", &GroupRep::mats)
      .def_property_readonly("order", [](const GroupRep& r) { return r.group.order; });
  m.def("s3_irrep", &s3_irrep);
  m.def("rotated_psi", [](double theta, cplx a, cplx b) { return rotated_psi(theta, a, b); }, py::arg("theta"),
        py::arg("alpha"), py::arg("beta"));
  m.def("schur_channel", [](const GroupRep& a, const GroupRep& b, const CVector& psi, double tol) {
    const SchurData s = schur_channel(a, b, psi, tol);
    py::dict d;
    d["u"] = s.u;
    d["min_eigenvalue"] = s.minEigenvalue;
    d["unital_residual"] = s.unitalResidual;
    d["tp_residual"] = s.tpResidual;
    d["cptp"] = s.cptp;
    return d;
  }, py::arg("pi_a"), py::arg("pi_b"), py::arg("psi"), py::arg("tol") = kDefaultTol);
  m.def("selftest_hypotheses", [](const GroupRep& a, const GroupRep& b, const CVector& psi, double tol) {
    const Hypotheses h = selftest_hypotheses(a, b, psi, tol);
    py::dict d;
    d["marginally_cyclic"] = h.marginallyCyclic;
    d["extremality_rank"] = h.extremalityRank;
    d["verdict"] = h.verdict;
    return d;
  }, py::arg("pi_a"), py::arg("pi_b"), py::arg("psi"), py::arg("tol") = kDefaultTol);
  m.def("schur_extension", &schur_extension, py::arg("pi_a"), py::arg("pi_b"), py::arg("psi"),
        py::arg("weights"), py::arg("seed") = 0, py::arg("conjugate") = true);
  m.def("schur_dilation", [](const Model& x, const GroupRep& a, const GroupRep& b, const CVector& psi,
                             double tol, std::uint64_t seed) {
    const SchurDilation s = schur_dilation(x, a, b, psi, tol, seed);
    py::dict d;
    d["verdict"] = s.verdict;
    d["aux_weights"] = s.auxWeights;
    d["residuals"] = residual_dict(s.residuals);
    return d;
  }, py::arg("model"), py::arg("pi_a"), py::arg("pi_b"), py::arg("psi"), py::arg("tol") = kDefaultTol,
        py::arg("seed") = 0);
}
