// Python bindings.  Structured results cross the boundary as JSON text and
// are decoded by the ltk package.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ltk/admissibility.hpp"
#include "ltk/charmodel.hpp"
#include "ltk/json_io.hpp"
#include "ltk/normal_form.hpp"
#include "ltk/oracle.hpp"

namespace py = pybind11;
using namespace ltk;

namespace {

DecideOptions options(const Rule& r, unsigned agents, std::optional<std::uint64_t> max_d,
                      std::optional<std::uint64_t> max_cluster, std::optional<std::uint64_t> max_tail,
                      const std::string& cond5, unsigned jobs) {
  DecideOptions o;
  SearchBounds b = SearchBounds::defaults_for(reduce(r, agents).thetas.size());
  if (max_d) b.max_d = *max_d;
  if (max_cluster) b.max_cluster_size = *max_cluster;
  if (max_tail) b.max_tail_len = *max_tail;
  b.validate();
  o.bounds = b;
  if (cond5 == "frame") o.cond5 = IsoMode::Frame;
  else if (cond5 != "model") throw std::invalid_argument("cond5 must be 'model' or 'frame'");
  o.jobs = jobs;
  return o;
}

std::string admissible(const std::string& rule, unsigned agents, std::optional<std::uint64_t> max_d,
                       std::optional<std::uint64_t> max_cluster, std::optional<std::uint64_t> max_tail,
                       const std::string& cond5, unsigned jobs) {
  const Rule r = parse_rule(rule, agents);
  const DecideOptions o = options(r, agents, max_d, max_cluster, max_tail, cond5, jobs);
  Verdict v;
  {
    py::gil_scoped_release release;
    v = decide_admissible(r, agents, o);
  }
  json j;
  j["rule"] = to_string(r);
  j["agents"] = agents;
  j["verdict"] = v.admissible() ? "admissible" : "not-admissible";
  j["theta_count"] = index_to_json(v.reduced.thetas.size());
  j["bounds"] = to_json(v.bounds);
  j["cond5"] = cond5;
  if (v.witness) j["witness"] = to_json(v.reduced, *v.witness, v.bounds);
  return j.dump();
}

std::string theorem(const std::string& formula, unsigned agents, std::optional<std::uint64_t> max_d,
                    std::optional<std::uint64_t> max_cluster, std::optional<std::uint64_t> max_tail,
                    const std::string& cond5, unsigned jobs) {
  const Formula f = parse_formula(formula, agents);
  const DecideOptions o = options(Rule{{Formula::top()}, f}, agents, max_d, max_cluster, max_tail, cond5, jobs);
  TheoremVerdict tv;
  {
    py::gil_scoped_release release;
    tv = decide_theorem(f, agents, o);
  }
  json j;
  j["formula"] = to_string(f);
  j["agents"] = agents;
  j["verdict"] = tv.theorem() ? "theorem" : "not-theorem";
  j["bounds"] = to_json(tv.verdict.bounds);
  j["cond5"] = cond5;
  if (tv.countermodel) j["countermodel"] = to_json(*tv.countermodel);
  if (tv.verdict.witness) j["witness"] = to_json(tv.verdict.reduced, *tv.verdict.witness, tv.verdict.bounds);
  return j.dump();
}

std::string check(const std::string& rule, const std::string& witness, unsigned agents, const std::string& cond5) {
  const Rule r = parse_rule(rule, agents);
  const ReducedRule rr = reduce(r, agents);
  json j = json::parse(witness);
  if (j.contains("witness")) j = j.at("witness");
  const WitnessReport rep =
      check_witness(rr, witness_from_json(rr, j), cond5 == "frame" ? IsoMode::Frame : IsoMode::Model);
  json o;
  o["ok"] = rep.ok;
  json vs = json::array();
  for (const auto& [c, d] : rep.violations) vs.push_back(json{{"condition", c}, {"detail", d}});
  o["violations"] = vs;
  return o.dump();
}

std::string model_check(const std::string& model, const std::string& formula) {
  const Model m = model_from_json(json::parse(model));
  const Formula f = parse_formula(formula, m.frame.agents());
  const auto truth = truth_set(m, f);
  std::vector<WorldId> holds(truth.begin(), truth.end()), refuted;
  for (std::size_t c = 0; c < m.frame.cluster_count(); ++c)
    for (WorldId w : m.frame.cluster(c).worlds)
      if (!truth.count(w)) refuted.push_back(w);
  std::sort(refuted.begin(), refuted.end());
  json j;
  j["formula"] = to_string(f);
  j["holds_at"] = holds;
  j["refuted_at"] = refuted;
  j["valid"] = refuted.empty();
  return j.dump();
}

std::string refute(const std::string& formula, unsigned agents, std::size_t clusters, std::size_t size) {
  const Formula f = parse_formula(formula, agents);
  const FrameBounds b{clusters, size, agents};
  const auto cm = refute_formula(f, b);
  json j;
  j["formula"] = to_string(f);
  j["bounds"] = to_json(b);
  j["refuted"] = cm.has_value();
  if (cm) j["countermodel"] = to_json(*cm);
  return j.dump();
}

}  // namespace

PYBIND11_MODULE(_ltk, m) {
  m.doc() = "Decision procedures for the temporal-epistemic logic LTK_r";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);

  m.def("normalize_formula", [](const std::string& s, unsigned agents) { return to_string(parse_formula(s, agents)); },
        py::arg("formula"), py::arg("agents") = 1);
  m.def("normalize_rule", [](const std::string& s, unsigned agents) { return to_string(parse_rule(s, agents)); },
        py::arg("rule"), py::arg("agents") = 1);
  m.def("normal_form",
        [](const std::string& s, unsigned agents, std::size_t max_thetas) {
          return nf_to_json(reduce(parse_rule(s, agents), agents), max_thetas).dump();
        },
        py::arg("rule"), py::arg("agents") = 1, py::arg("max_thetas") = 4096);
  m.def("admissible", &admissible, py::arg("rule"), py::arg("agents") = 1, py::arg("max_d") = py::none(),
        py::arg("max_cluster") = py::none(), py::arg("max_tail") = py::none(), py::arg("cond5") = "model",
        py::arg("jobs") = 1);
  m.def("theorem", &theorem, py::arg("formula"), py::arg("agents") = 1, py::arg("max_d") = py::none(),
        py::arg("max_cluster") = py::none(), py::arg("max_tail") = py::none(), py::arg("cond5") = "model",
        py::arg("jobs") = 1);
  m.def("check_witness", &check, py::arg("rule"), py::arg("witness"), py::arg("agents") = 1,
        py::arg("cond5") = "model");
  m.def("model_check", &model_check, py::arg("model"), py::arg("formula"));
  m.def("charmodel",
        [](unsigned vars, std::size_t max_cluster, unsigned agents, std::size_t depth, bool step2_all) {
          return to_json(build_slices(build_catalogue(vars, max_cluster, agents), depth, step2_all)).dump();
        },
        py::arg("vars") = 1, py::arg("max_cluster") = 2, py::arg("agents") = 1, py::arg("depth") = 2,
        py::arg("step2_all") = false);
  m.def("refute", &refute, py::arg("formula"), py::arg("agents") = 1, py::arg("max_clusters") = 3,
        py::arg("max_size") = 2);
  m.def("equivalid",
        [](const std::string& s, unsigned agents, std::size_t clusters, std::size_t size) {
          return equivalid_nf(parse_rule(s, agents), FrameBounds{clusters, size, agents});
        },
        py::arg("rule"), py::arg("agents") = 1, py::arg("max_clusters") = 3, py::arg("max_size") = 2);
}
