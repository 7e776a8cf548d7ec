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

// selftest command line front end. Every command prints a JSON report with
// residuals; exit status is 0 on pass, 1 on fail and 2 on input errors.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "selftest/chsh.hpp"
#include "selftest/clifford.hpp"
#include "selftest/dilation.hpp"
#include "selftest/errors.hpp"
#include "selftest/games.hpp"
#include "selftest/io.hpp"
#include "selftest/models.hpp"
#include "selftest/random.hpp"
#include "selftest/schur.hpp"

using namespace selftest;

namespace {

struct Options {
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::string out;
  std::string artifact;
  bool timing = false;
  double resolved_tol = kDefaultTol;
};

struct Outcome {
  Json report = Json::object();
  bool pass = true;
  std::optional<Json> artifact;
};

using Action = std::function<Outcome()>;

double tolerance_from(const Options& o) {
  if (o.tol) {
    if (!(*o.tol > 0) || !std::isfinite(*o.tol)) throw Error("--tol must be positive");
    return *o.tol;
  }
  if (const char* env = std::getenv("SELFTEST_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0) || !std::isfinite(v))
      throw Error(std::string("SELFTEST_TOL is not a positive number: ") + env);
    return v;
  }
  return kDefaultTol;
}

Json verdict_json(const Verdict& v) {
  return Json{{"valid", v.valid}, {"description", v.description}, {"magnitude", v.magnitude}};
}

Json real_vector(const RVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

HomModel qcolor_model(std::uint64_t seed, int ampliation, bool rotate) {
  HomModel m = pauli_hom_model();
  if (ampliation > 1) m = ampliate(m, ampliation);
  if (rotate) {
    Rng rng(seed);
    m = conjugate(m, random_unitary(m.dim, rng));
  }
  return m;
}

CVector schur_state(double theta, double alpha2) {
  if (alpha2 < 0 || alpha2 > 1) throw Error("--alpha2 must lie in [0, 1]");
  return rotated_psi(theta, std::sqrt(alpha2), std::sqrt(1.0 - alpha2));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-testing verification for quantum correlation models"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--tol", opt.tol, "Numerical tolerance (overrides SELFTEST_TOL)");
  app.add_option("--seed", opt.seed, "Seed for randomized steps");
  app.add_option("--out", opt.out, "Write the report to this file instead of stdout");
  app.add_option("--artifact", opt.artifact, "Write the produced model or correlation here");
  app.add_flag("--timing", opt.timing, "Include wall time in the report");
  app.set_version_flag("--version", library_version());

  Action action;
  std::string command;
  const double& tol = opt.resolved_tol;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->callback([&command, parent, name] { command = parent->get_name() + " " + name; });
    return sub;
  };
  auto bind = [&action](CLI::App* sub, Action a) {
    sub->parse_complete_callback([&action, a] { action = a; });
  };

  // chsh
  CLI::App* chsh = app.add_subcommand("chsh", "CHSH pipeline");
  chsh->require_subcommand(1);
  std::string modelPath;
  {
    CLI::App* c = leaf(chsh, "score", "Winning probability and bias of a model");
    c->add_option("model", modelPath, "Model JSON")->required()->check(CLI::ExistingFile);
    bind(c, [&] {
      Outcome o;
      const Model m = parse_model(read_json_file(modelPath), tol);
      const NsCorrelation p = correlation_ns(m, tol);
      const ChshScore s = chsh_score(p);
      o.report["winProb"] = s.winProb;
      o.report["bias"] = s.bias;
      o.report["residuals"] = {{"tsirelson_gap", kTsirelsonBias - s.bias},
                               {"ns_validity", validate(p, tol).magnitude}};
      o.artifact = to_json(p);
      return o;
    });

    c = leaf(chsh, "selftest", "Swap-isometry self-test (ideal model if no file)");
    c->add_option("model", modelPath, "Model JSON")->check(CLI::ExistingFile);
    bind(c, [&] {
      Outcome o;
      const Model m = modelPath.empty() ? chsh_ideal_model() : parse_model(read_json_file(modelPath), tol);
      try {
        const SwapReport r = swap_selftest(m, tol);
        o.pass = r.verdict;
        o.report["bias"] = r.bias;
        o.report["status"] = to_string(r.dilation.status);
        Json res = to_json(r.residuals);
        res["dilation"] = r.dilation.maxResidual;
        res["isometry"] = r.dilation.isometryResidual;
        o.report["residuals"] = std::move(res);
        o.report["worstPair"] = {r.dilation.worstPair.alice, r.dilation.worstPair.bob};
        o.report["xiAux"] = to_json(r.xiAux);
      } catch (const NotOptimal& e) {
        o.pass = false;
        o.report["error"] = e.what();
        o.report["residuals"] = {{"optimality_gap", e.gap}};
      }
      return o;
    });

    c = leaf(chsh, "extract-pvm", "Projective model with the same correlation");
    c->add_option("model", modelPath, "Model JSON")->required()->check(CLI::ExistingFile);
    bind(c, [&] {
      Outcome o;
      const Model m = parse_model(read_json_file(modelPath), tol);
      const Model pvm = extract_pvm(m, tol);
      const Verdict v = validate(pvm, tol);
      const double diff = max_abs_diff(correlation_ns(m, tol), correlation_ns(pvm, tol));
      o.pass = v.valid && diff <= std::max(tol, 1e-8);
      o.report["residuals"] = {{"validity", v.magnitude}, {"correlation", diff}};
      o.report["kinds"] = {to_string(pvm.alice.kind), to_string(pvm.bob.kind)};
      o.artifact = to_json(pvm);
      return o;
    });

    c = leaf(chsh, "counterexample", "SOM model matching CHSH on the diagonal but not dilating");
    bind(c, [&] {
      Outcome o;
      const CounterexampleReport r = counterexample_som(tol);
      o.pass = r.verdict;
      o.report["aliceValid"] = r.aliceValid;
      o.report["bobValid"] = r.bobValid;
      o.report["residuals"] = {{"qns_diagonal", r.qnsDiagonalResidual}, {"qns", r.qnsResidual}};
      o.report["obstruction"] = r.obstruction;
      o.report["worst"] = {{"x", r.worst[0]}, {"y", r.worst[1]}, {"a", r.worst[2]}, {"b", r.worst[3]}};
      o.artifact = to_json(r.model);
      return o;
    });
  }

  // clifford
  CLI::App* cliff = app.add_subcommand("clifford", "Clifford correlations");
  cliff->require_subcommand(1);
  int cliffN = 2;
  bool independent = false;
  {
    CLI::App* c = leaf(cliff, "rep", "Anticommuting self-adjoint unitaries");
    c->add_option("--n", cliffN, "Number of generators (even)");
    bind(c, [&] {
      Outcome o;
      const auto us = clifford_rep(cliffN);
      const Eigen::Index d = us.front().rows();
      double anti = 0, unit = 0, herm = 0, quot = 0;
      std::vector<CMatrix> r;
      for (const auto& u : us) r.push_back(0.5 * (identity(d) + u));
      for (std::size_t x = 0; x < us.size(); ++x) {
        unit = std::max(unit, unitary_residual(us[x]));
        herm = std::max(herm, hermitian_residual(us[x]));
        for (std::size_t y = x + 1; y < us.size(); ++y) {
          anti = std::max(anti, frob(us[x] * us[y] + us[y] * us[x]));
          quot = std::max(quot, quotient_relation_check(r[x], r[y], tol));
        }
      }
      o.report["dim"] = d;
      o.report["residuals"] = {{"anticommutation", anti}, {"unitary", unit}, {"hermitian", herm},
                               {"quotient_relation", quot}};
      o.pass = std::max({anti, unit, herm, quot}) <= tol;
      return o;
    });

    c = leaf(cliff, "correlation", "Canonical Clifford correlation");
    c->add_option("--n", cliffN, "Number of inputs (even)");
    bind(c, [&] {
      Outcome o;
      const NsCorrelation p = clifford_correlation(cliffN, tol);
      const Verdict v = validate(p, tol);
      o.pass = v.valid;
      o.report["synchronous"] = p.synchronous;
      o.report["residuals"] = {{"ns_validity", v.magnitude}};
      o.artifact = to_json(p);
      return o;
    });

    c = leaf(cliff, "witness", "Kernel of n I - sum u_x (x) u_x");
    c->add_option("--n", cliffN, "Number of generators (even)");
    bind(c, [&] {
      Outcome o;
      const WitnessKernel w = witness_kernel(cliffN, tol);
      const Eigen::Index d = Eigen::Index(std::sqrt(double(w.witness.rows())) + 0.5);
      // The kernel vector is maximally entangled; for n = 2 it is Omega_2 itself.
      double entangled = 1.0, overlap = 0.0;
      if (w.kernel.cols() == 1) {
        const RVector sc = schmidt_coefficients(w.kernel.col(0), d, d);
        entangled = (sc.array() - 1.0 / std::sqrt(double(d))).abs().maxCoeff();
        overlap = std::abs(max_entangled(d).dot(w.kernel.col(0)));
      }
      o.report["kernelDim"] = w.kernel.cols();
      o.report["minEigenvalue"] = w.minEigenvalue;
      Json res = {{"psd", std::max(0.0, -w.minEigenvalue)}, {"max_entangled", entangled}};
      if (cliffN == 2) res["omega_overlap"] = 1.0 - overlap;
      o.report["residuals"] = res;
      o.pass = w.minEigenvalue >= -tol && w.kernel.cols() == 1 && entangled <= tol &&
               (cliffN != 2 || 1.0 - overlap <= tol);
      return o;
    });

    c = leaf(cliff, "ac-check", "Moment constraint m_ee - m_ww = 1/8");
    c->add_option("--n", cliffN, "Number of inputs");
    c->add_flag("--independent", independent, "Use independent commuting fair bits instead");
    c->add_option("--model", modelPath, "Model JSON")->check(CLI::ExistingFile);
    bind(c, [&] {
      Outcome o;
      const Model m = !modelPath.empty() ? parse_model(read_json_file(modelPath), tol)
                      : independent      ? independent_bits_model(cliffN)
                                         : clifford_canonical_model(cliffN);
      const AcReport r = ac_check(m, tol);
      Json pairs = Json::array();
      for (const auto& p : r.pairs) pairs.push_back({{"x", p.x}, {"y", p.y}, {"residual", p.residual}});
      o.report["pairs"] = std::move(pairs);
      o.report["residuals"] = {{"max", r.maxResidual}};
      o.pass = r.verdict;
      return o;
    });
  }

  // qcolor
  CLI::App* qcolor = app.add_subcommand("qcolor", "Quantum graph coloring of K4");
  qcolor->require_subcommand(1);
  int ampl = 1;
  bool conj = false;
  {
    CLI::App* c = leaf(qcolor, "verify", "Perfect-strategy check of Gamma_K4");
    c->add_option("--ampliate", ampl, "Multiplicity of the Pauli model");
    c->add_flag("--conjugate", conj, "Conjugate by a random unitary drawn from --seed");
    bind(c, [&] {
      Outcome o;
      const HomModel m = qcolor_model(opt.seed, ampl, conj);
      const Verdict v = validate(m, tol);
      const PerfectReport r = verify_perfect(gamma_correlation(m, tol), 2, tol);
      Json res = to_json(r.residuals);
      res["diagonal"] = r.diagonalResidual;
      res["off_diagonal"] = r.offDiagonalResidual;
      res["model"] = v.magnitude;
      o.report["residuals"] = std::move(res);
      o.pass = v.valid && r.verdict;
      return o;
    });

    c = leaf(qcolor, "extract", "Recover the Pauli form of a perfect model");
    c->add_option("--ampliate", ampl, "Multiplicity of the Pauli model");
    c->add_flag("--conjugate", conj, "Conjugate by a random unitary drawn from --seed");
    bind(c, [&] {
      Outcome o;
      const HomModel m = qcolor_model(opt.seed, ampl, conj);
      const PauliForm f = extract_pauli_form(m, tol, opt.seed);
      Json res = to_json(f.residuals);
      res["multimp"] = f.multimpResidual;
      res["trace"] = f.traceResidual;
      o.report["residuals"] = std::move(res);
      o.report["multiplicity"] = f.nDim;
      o.pass = f.verdict;
      return o;
    });
  }

  // scenario
  CLI::App* scen = app.add_subcommand("scenario", "Contextuality scenarios");
  scen->require_subcommand(1);
  std::string scenPath;
  {
    CLI::App* c = leaf(scen, "check", "Check an assignment (scenario JSON or NS correlation)");
    c->add_option("input", scenPath, "JSON file")->required()->check(CLI::ExistingFile);
    bind(c, [&] {
      Outcome o;
      const Json j = read_json_file(scenPath);
      Scenario s;
      std::vector<double> p;
      const Json& kind = field(j, "kind", "$");
      if (kind == "scenario") {
        s.vertices = int_from_json(field(j, "vertices", "$"), "$.vertices");
        const Json& ej = field(j, "edges", "$");
        if (!ej.is_array()) throw SchemaError("$.edges", "expected an array");
        for (std::size_t i = 0; i < ej.size(); ++i) {
          std::vector<int> e;
          if (!ej[i].is_array()) throw SchemaError("$.edges[" + std::to_string(i) + "]", "expected an array");
          for (std::size_t k = 0; k < ej[i].size(); ++k)
            e.push_back(int_from_json(ej[i][k], "$.edges[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
          s.edges.push_back(std::move(e));
        }
        const Json& pj = field(j, "p", "$");
        if (!pj.is_array()) throw SchemaError("$.p", "expected an array");
        for (std::size_t i = 0; i < pj.size(); ++i)
          p.push_back(real_from_json(pj[i], "$.p[" + std::to_string(i) + "]"));
        require_valid(s);
      } else {
        const AnyCorrelation c = parse_correlation(j, tol);
        if (c.kind != "ns") throw SchemaError("$.kind", "scenario check needs an ns correlation");
        s = bell_scenario(c.ns.nX, c.ns.nA);
        if (c.ns.nY != c.ns.nX || c.ns.nB != c.ns.nA)
          throw DimensionMismatch("scenario check: Bell scenario needs equal input and output sizes");
        p = bell_assignment(c.ns);
      }
      const ScenarioReport r = scenario_check(s, p, tol);
      double edge = 0;
      for (double e : r.edgeResiduals) edge = std::max(edge, e);
      o.report["residuals"] = {{"edges", edge}, {"normalization", r.normalizationResidual},
                               {"negativity", r.negativity}};
      o.report["edgeResiduals"] = r.edgeResiduals;
      o.pass = r.verdict;
      return o;
    });
  }

  // schur
  CLI::App* schur = app.add_subcommand("schur", "Schur multiplier channels on S3");
  schur->require_subcommand(1);
  double theta = std::numbers::pi / 3, alpha2 = 0.25;
  std::vector<double> weights{0.3, 0.7};
  {
    auto state_opts = [&](CLI::App* c) {
      c->add_option("--theta", theta, "Rotation angle of the basis");
      c->add_option("--alpha2", alpha2, "|alpha|^2 of the state");
    };
    CLI::App* c = leaf(schur, "build", "Multiplier table and channel checks");
    state_opts(c);
    bind(c, [&] {
      Outcome o;
      const GroupRep pi = s3_irrep();
      const SchurData d = schur_channel(pi, pi, schur_state(theta, alpha2), tol);
      Json u = Json::array();
      for (int s = 0; s < d.group.order; ++s) {
        Json row = Json::array();
        for (int t = 0; t < d.group.order; ++t) row.push_back(to_json(d.u(s, t)));
        u.push_back(std::move(row));
      }
      o.report["labels"] = d.group.labels;
      o.report["u"] = std::move(u);
      o.report["minEigenvalue"] = d.minEigenvalue;
      o.report["residuals"] = {{"unital", d.unitalResidual}, {"trace_preserving", d.tpResidual},
                               {"negativity", std::max(0.0, -d.minEigenvalue)}};
      o.pass = d.cptp;
      return o;
    });

    c = leaf(schur, "hypotheses", "Marginal cyclicity and extremality rank");
    state_opts(c);
    bind(c, [&] {
      Outcome o;
      const GroupRep pi = s3_irrep();
      const Hypotheses h = selftest_hypotheses(pi, pi, schur_state(theta, alpha2), tol);
      o.report["marginallyCyclic"] = h.marginallyCyclic;
      o.report["extremalityRank"] = h.extremalityRank;
      o.report["schmidt"] = real_vector(h.schmidt);
      o.report["residuals"] = {{"rank_deficit", double(16 - h.extremalityRank)}};
      o.pass = h.verdict;
      return o;
    });

    c = leaf(schur, "selftest", "Dilate a unitary model onto the ideal one");
    state_opts(c);
    c->add_option("--weights", weights, "Multiplicity weights of the generated model")->delimiter(',');
    c->add_option("--model", modelPath, "Model JSON (default: conjugated multiplicity extension)")
        ->check(CLI::ExistingFile);
    bind(c, [&] {
      Outcome o;
      const GroupRep pi = s3_irrep();
      const CVector psi = schur_state(theta, alpha2);
      const Model m = modelPath.empty() ? schur_extension(pi, pi, psi, weights, opt.seed, true)
                                        : parse_model(read_json_file(modelPath), tol);
      const SchurDilation r = schur_dilation(m, pi, pi, psi, tol, opt.seed);
      o.report["status"] = to_string(r.report.status);
      o.report["residuals"] = to_json(r.residuals);
      o.report["auxWeights"] = r.auxWeights;
      o.report["auxDims"] = {r.tA.rows() / pi.dim, r.tB.rows() / pi.dim};
      o.pass = r.verdict;
      return o;
    });
  }

  // som
  CLI::App* som = app.add_subcommand("som", "Stochastic operator matrices");
  som->require_subcommand(1);
  std::string somPath;
  int somX = 2, somA = 2, somH = 2;
  auto load_som = [&] {
    MeasurementFamily f = parse_family(read_json_file(somPath));
    if (!f.is_som()) throw SchemaError("$.kind", "expected 'som' or 'usom'");
    return f;
  };
  {
    CLI::App* c = leaf(som, "validate", "Positivity and partial-trace condition");
    c->add_option("som", somPath, "SOM JSON")->required()->check(CLI::ExistingFile);
    bind(c, [&] {
      Outcome o;
      const Verdict v = validate(load_som(), tol);
      o.report["validation"] = verdict_json(v);
      o.report["residuals"] = {{"validity", v.magnitude}};
      o.pass = v.valid;
      return o;
    });

    c = leaf(som, "factor", "Block isometry with E = V^* V");
    c->add_option("som", somPath, "SOM JSON")->required()->check(CLI::ExistingFile);
    bind(c, [&] {
      Outcome o;
      const BlockIsometry b = som_isometry(load_som(), tol);
      o.report["k"] = b.k;
      o.report["residuals"] = {{"factorization", b.residual}};
      o.pass = b.residual <= tol;
      return o;
    });

    c = leaf(som, "dilate", "Unistochastic dilation E = W^* U^* U W");
    c->add_option("som", somPath, "SOM JSON")->required()->check(CLI::ExistingFile);
    bind(c, [&] {
      Outcome o;
      const UsomDilation d = usom_dilate(load_som(), tol);
      o.report["dims"] = {{"h", d.h}, {"k", d.k}, {"l", d.l}};
      o.report["residuals"] = {{"unitary", d.unitaryResidual}, {"reconstruction", d.reconstructionResidual}};
      o.pass = d.unitaryResidual <= tol && d.reconstructionResidual <= tol;
      o.artifact = to_json(d.usom);
      return o;
    });

    c = leaf(som, "random", "Random SOM from a random block isometry");
    c->add_option("--X", somX, "Inputs");
    c->add_option("--A", somA, "Outputs");
    c->add_option("--dim", somH, "Block size h");
    bind(c, [&] {
      Outcome o;
      const MeasurementFamily f = random_som(somX, somA, somH, opt.seed);
      const Verdict v = validate(f, tol);
      o.report["residuals"] = {{"validity", v.magnitude}};
      o.pass = v.valid;
      o.artifact = to_json(f);
      return o;
    });
  }

  // model
  CLI::App* model = app.add_subcommand("model", "Correlations and structure of models");
  model->require_subcommand(1);
  bool qns = false;
  int maxWordLen = 8;
  std::string exportName = "chsh-ideal";
  {
    CLI::App* c = leaf(model, "correlation", "Correlation of a model");
    c->add_option("model", modelPath, "Model JSON")->required()->check(CLI::ExistingFile);
    c->add_flag("--qns", qns, "Quantum no-signalling correlation instead of NS");
    bind(c, [&] {
      Outcome o;
      const Model m = parse_model(read_json_file(modelPath), tol);
      if (qns || m.alice.is_som() || m.bob.is_som()) {
        // POVM models enter the quantum no-signalling set through the classical lift.
        const bool lifted = !m.alice.is_som() && !m.bob.is_som();
        const QnsCorrelation g = lifted ? lift_classical(correlation_ns(m, tol)) : correlation_qns(m, tol);
        o.report["lifted"] = lifted;
        o.report["residuals"] = {{"validity", validate(g, tol).magnitude}};
        o.artifact = to_json(g);
      } else {
        const NsCorrelation p = correlation_ns(m, tol);
        o.report["synchronous"] = p.synchronous;
        o.report["residuals"] = {{"validity", validate(p, tol).magnitude}};
        o.artifact = to_json(p);
      }
      return o;
    });

    c = leaf(model, "support", "Support projections and reduced model");
    c->add_option("model", modelPath, "Model JSON")->required()->check(CLI::ExistingFile);
    c->add_option("--max-word-len", maxWordLen, "Word length bound for algebra spans");
    bind(c, [&] {
      Outcome o;
      const Model m = parse_model(read_json_file(modelPath), tol);
      const SupportData s = support_data(m, maxWordLen, tol);
      double diff;
      if (m.alice.is_som() || m.bob.is_som())
        diff = max_abs_diff(correlation_qns(m, tol), correlation_qns(s.reduced, tol));
      else
        diff = max_abs_diff(correlation_ns(m, tol), correlation_ns(s.reduced, tol));
      o.report["fullRank"] = s.fullRank;
      o.report["centrallySupported"] = s.centrallySupported;
      o.report["algebraDims"] = {s.algebraDimA, s.algebraDimB};
      o.report["reducedDim"] = s.reduced.dim();
      o.report["residuals"] = {{"reduced_correlation", diff}};
      o.pass = diff <= tol;
      o.artifact = to_json(s.reduced);
      return o;
    });

    c = leaf(model, "split", "Split a commuting model into tensor components");
    c->add_option("model", modelPath, "Model JSON")->required()->check(CLI::ExistingFile);
    bind(c, [&] {
      Outcome o;
      const Model m = parse_model(read_json_file(modelPath), tol);
      const SplitResult r = split_commuting(m, tol, opt.seed);
      Json comps = Json::array();
      double wsum = 0;
      for (const auto& c : r.components) {
        wsum += c.weight;
        comps.push_back({{"weight", c.weight}, {"block", c.block}, {"dims", {c.model.dimA, c.model.dimB}}});
      }
      o.report["components"] = std::move(comps);
      o.report["residuals"] = {{"structure", r.structureResidual}, {"reassembly", r.reassemblyResidual},
                               {"weight_sum", std::abs(wsum - 1.0)}};
      o.pass = r.structureResidual <= tol && r.reassemblyResidual <= tol && std::abs(wsum - 1.0) <= tol;
      return o;
    });

    c = leaf(model, "export", "Write a built-in model");
    c->add_option("name", exportName, "chsh-ideal | clifford | independent-bits")->required();
    c->add_option("--n", cliffN, "Number of inputs");
    bind(c, [&] {
      Outcome o;
      Model m;
      if (exportName == "chsh-ideal") m = chsh_ideal_model();
      else if (exportName == "clifford") m = clifford_canonical_model(cliffN);
      else if (exportName == "independent-bits") m = independent_bits_model(cliffN);
      else throw Error("unknown model name '" + exportName + "'");
      o.report["residuals"] = {{"validity", validate(m, tol).magnitude}};
      o.artifact = to_json(m);
      return o;
    });
  }

  // dilate
  CLI::App* dil = app.add_subcommand("dilate", "Local dilation checks");
  dil->require_subcommand(1);
  std::string idealPath, isoPath;
  {
    CLI::App* c = leaf(dil, "verify", "Check S <= S~ through given isometries");
    c->add_option("model", modelPath, "Model JSON")->required()->check(CLI::ExistingFile);
    c->add_option("ideal", idealPath, "Ideal model JSON")->required()->check(CLI::ExistingFile);
    c->add_option("isometry", isoPath, "{\"vA\", \"vB\"} or {\"v\"} JSON")->required()->check(CLI::ExistingFile);
    bind(c, [&] {
      Outcome o;
      const Model s = parse_model(read_json_file(modelPath), tol);
      const Model ideal = parse_model(read_json_file(idealPath), tol);
      const Json iso = read_json_file(isoPath);
      DilationReport r;
      if (iso.contains("v"))
        r = verify_dilation(s, ideal, matrix_from_json(iso["v"], "$.v"), tol);
      else
        r = verify_local_dilation(s, ideal, matrix_from_json(field(iso, "vA", "$"), "$.vA"),
                                  matrix_from_json(field(iso, "vB", "$"), "$.vB"), tol);
      o.report["status"] = to_string(r.status);
      o.report["residuals"] = {{"dilation", r.maxResidual}, {"isometry", r.isometryResidual}};
      o.report["worstPair"] = {r.worstPair.alice, r.worstPair.bob};
      o.report["auxNorm"] = r.auxNorm;
      o.report["xiAux"] = to_json(r.xiAux);
      o.pass = r.verdict;
      return o;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    opt.resolved_tol = tolerance_from(opt);
    const auto start = std::chrono::steady_clock::now();
    Outcome o = action();
    Json report;
    report["command"] = command;
    report["version"] = library_version();
    report["tolerance"] = tol;
    report["seed"] = opt.seed;
    report["verdict"] = o.pass;
    for (auto& [k, v] : o.report.items()) report[k] = v;
    if (opt.timing)
      report["timing_ms"] =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (o.artifact && !opt.artifact.empty()) {
      std::ofstream a(opt.artifact);
      if (!a) throw Error("cannot write " + opt.artifact);
      a << dump(*o.artifact) << "\n";
    }
    if (opt.out.empty()) {
      std::cout << dump(report) << "\n";
    } else {
      std::ofstream f(opt.out);
      if (!f) throw Error("cannot write " + opt.out);
      f << dump(report) << "\n";
    }
    return o.pass ? 0 : 1;
  } catch (const std::exception& e) {
    Json err{{"command", command}, {"version", library_version()}, {"error", e.what()}};
    if (const auto* v = dynamic_cast<const ValidationError*>(&e)) err["residual"] = v->residual;
    if (const auto* s = dynamic_cast<const SchemaError*>(&e)) err["path"] = s->path;
    std::cerr << dump(err) << "\n";
    return 2;
  }
}
