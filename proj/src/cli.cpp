#include "ltk/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "ltk/admissibility.hpp"
#include "ltk/charmodel.hpp"
#include "ltk/json_io.hpp"
#include "ltk/normal_form.hpp"
#include "ltk/oracle.hpp"

namespace ltk {

namespace {

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline text, or the contents of a file given as @path.
std::string input_text(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') return read_file(arg.substr(1));
  return arg;
}

json read_json_file(const std::string& arg) {
  const std::string path = !arg.empty() && arg[0] == '@' ? arg.substr(1) : arg;
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

struct Config {
  unsigned agents = 1;
  std::string format = "text";
  bool quiet = false;
  unsigned jobs = 1;
  std::optional<std::uint64_t> max_d, max_cluster, max_tail;
  std::string cond5 = "model";
  std::size_t frame_clusters = 3;
  std::size_t frame_size = 2;

  bool as_json() const { return format == "json"; }
  IsoMode iso() const { return cond5 == "frame" ? IsoMode::Frame : IsoMode::Model; }
  FrameBounds frame_bounds() const { return FrameBounds{frame_clusters, frame_size, agents}; }

  SearchBounds bounds_for(const BigCount& s) const {
    SearchBounds b = SearchBounds::defaults_for(s);
    if (max_d) b.max_d = *max_d;
    if (max_cluster) b.max_cluster_size = *max_cluster;
    if (max_tail) b.max_tail_len = *max_tail;
    b.validate();
    return b;
  }
};

unsigned default_jobs() {
  if (const char* env = std::getenv("LTK_JOBS")) {
    try {
      const unsigned long v = std::stoul(env);
      if (v >= 1 && v <= 1024) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

std::string bounds_text(const SearchBounds& b) {
  return "max_d=" + std::to_string(b.max_d) + " max_cluster_size=" + std::to_string(b.max_cluster_size) +
         " max_tail_len=" + std::to_string(b.max_tail_len);
}

std::string frame_bounds_text(const FrameBounds& b) {
  return "max_clusters=" + std::to_string(b.max_clusters) + " max_cluster_size=" +
         std::to_string(b.max_cluster_size) + " agents=" + std::to_string(b.agents);
}

std::string ids_text(const std::vector<WorldId>& ids) {
  std::string s = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? " " : "") + std::to_string(ids[i]);
  return s + "]";
}

std::string model_text(const Model& m) {
  std::string out;
  const Frame& f = m.frame;
  for (std::size_t c = 0; c < f.cluster_count(); ++c) {
    out += "  C" + std::to_string(c) + ": " + ids_text(f.cluster(c).worlds);
    for (unsigned l = 1; l <= f.agents(); ++l) {
      out += "  A" + std::to_string(l) + ":";
      for (const auto& b : f.cluster(c).partitions[l - 1]) out += " " + ids_text(b);
    }
    out += "\n";
  }
  for (const auto& [v, s] : m.valuation)
    out += "  V(p" + std::to_string(v) + ") = " + ids_text(std::vector<WorldId>(s.begin(), s.end())) + "\n";
  return out;
}

std::string witness_text(const ReducedRule& rr, const Witness& w) {
  const SpFrame& sp = w.frame;
  std::string out;
  if (sp.degenerate()) {
    out += "  frame: @ alone (world " + std::to_string(sp.top()) + ")\n";
  } else {
    out += "  d = " + std::to_string(sp.d()) + "\n";
    for (std::size_t i = 0; i < sp.main().size(); ++i) {
      out += "  C" + std::to_string(i) + ": " + ids_text(sp.main()[i].worlds);
      for (unsigned l = 1; l <= sp.agents(); ++l) {
        out += "  A" + std::to_string(l) + ":";
        for (const auto& b : sp.main()[i].partitions[l - 1]) out += " " + ids_text(b);
      }
      out += "\n";
    }
    for (std::size_t i = 0; i < sp.tails().size(); ++i)
      out += "  tail " + std::to_string(i) + ": " + ids_text(sp.tails()[i]) + "\n";
    out += "  @: " + std::to_string(sp.top()) + "\n";
  }
  for (const auto& [id, t] : w.labeling)
    out += "  label(" + std::to_string(id) + ") = theta[" + rr.thetas.rank(t).str() + "]\n";
  out += "  failing world: " + std::to_string(w.failing_world) + "\n";
  out += "  theta_a: theta[" + rr.thetas.rank(w.theta_a).str() + "]\n";
  return out;
}

// ── commands ────────────────────────────────────────────────────────────────

int cmd_nf(const Config& cfg, const std::string& rule_arg, std::size_t max_thetas, std::ostream& out) {
  const Rule r = parse_rule(input_text(rule_arg), cfg.agents);
  const ReducedRule rr = reduce(r, cfg.agents);
  if (cfg.quiet) return 0;
  if (cfg.as_json())
    out << nf_to_json(rr, max_thetas).dump() << "\n";
  else
    out << to_text(rr, max_thetas);
  return 0;
}

int cmd_admissible(const Config& cfg, const std::string& rule_arg, std::ostream& out) {
  const Rule r = parse_rule(input_text(rule_arg), cfg.agents);
  DecideOptions opts;
  opts.bounds = cfg.bounds_for(reduce(r, cfg.agents).thetas.size());
  opts.cond5 = cfg.iso();
  opts.jobs = cfg.jobs;
  const Verdict v = decide_admissible(r, cfg.agents, opts);
  const int code = v.admissible() ? 0 : 1;
  if (cfg.quiet) return code;
  if (cfg.as_json()) {
    json j;
    j["rule"] = to_string(r);
    j["agents"] = cfg.agents;
    j["verdict"] = v.admissible() ? "admissible" : "not-admissible";
    j["theta_count"] = index_to_json(v.reduced.thetas.size());
    j["bounds"] = to_json(v.bounds);
    j["cond5"] = cfg.cond5;
    if (v.witness) j["witness"] = to_json(v.reduced, *v.witness, v.bounds);
    out << j.dump() << "\n";
  } else {
    out << (v.admissible() ? "admissible" : "not admissible") << " (" << bounds_text(v.bounds) << ")\n";
    if (v.witness) out << "witness:\n" << witness_text(v.reduced, *v.witness);
  }
  return code;
}

int cmd_theorem(const Config& cfg, const std::string& formula_arg, std::ostream& out) {
  const Formula f = parse_formula(input_text(formula_arg), cfg.agents);
  DecideOptions opts;
  opts.bounds = cfg.bounds_for(reduce(Rule{{Formula::top()}, f}, cfg.agents).thetas.size());
  opts.cond5 = cfg.iso();
  opts.jobs = cfg.jobs;
  const TheoremVerdict tv = decide_theorem(f, cfg.agents, opts);
  const int code = tv.theorem() ? 0 : 1;
  if (cfg.quiet) return code;
  if (cfg.as_json()) {
    json j;
    j["formula"] = to_string(f);
    j["agents"] = cfg.agents;
    j["verdict"] = tv.theorem() ? "theorem" : "not-theorem";
    j["bounds"] = to_json(tv.verdict.bounds);
    j["cond5"] = cfg.cond5;
    if (tv.countermodel) j["countermodel"] = to_json(*tv.countermodel);
    if (tv.verdict.witness) j["witness"] = to_json(tv.verdict.reduced, *tv.verdict.witness, tv.verdict.bounds);
    out << j.dump() << "\n";
  } else {
    out << (tv.theorem() ? "theorem" : "not a theorem") << " (" << bounds_text(tv.verdict.bounds) << ")\n";
    if (tv.countermodel) {
      out << "countermodel, refuted at world " << tv.countermodel->world << ":\n"
          << model_text(tv.countermodel->model);
    }
  }
  return code;
}

int cmd_mc(const Config& cfg, const std::string& model_arg, const std::string& formula_arg,
           std::optional<WorldId> world, std::ostream& out) {
  const json mj = read_json_file(model_arg);
  const Model m = model_from_json(mj);
  const Formula f = parse_formula(input_text(formula_arg), m.frame.agents());
  for (unsigned v : variables(f))
    if (!m.valuation.count(v)) throw UsageError("model has no valuation for p" + std::to_string(v));
  const std::set<WorldId> truth = truth_set(m, f);
  std::vector<WorldId> holds, refuted, evaluable;
  const std::size_t td = time_degree(f);
  const json& cs = mj.at("clusters");
  for (std::size_t c = 0; c < m.frame.cluster_count(); ++c) {
    const bool has_layer = cs[c].contains("layer");
    const std::size_t layer = has_layer ? cs[c].at("layer").get<std::size_t>() : 0;
    for (WorldId w : m.frame.cluster(c).worlds) {
      (truth.count(w) ? holds : refuted).push_back(w);
      if (!has_layer || layer - 1 >= td) evaluable.push_back(w);
    }
  }
  std::sort(holds.begin(), holds.end());
  std::sort(refuted.begin(), refuted.end());
  std::sort(evaluable.begin(), evaluable.end());
  if (world && !m.frame.has_world(*world)) throw UsageError("unknown world " + std::to_string(*world));
  const bool positive = world ? truth.count(*world) != 0 : refuted.empty();
  const int code = positive ? 0 : 1;
  if (cfg.quiet) return code;
  if (cfg.as_json()) {
    json j;
    j["formula"] = to_string(f);
    j["holds_at"] = holds;
    j["refuted_at"] = refuted;
    j["evaluable_at"] = evaluable;
    j["valid"] = refuted.empty();
    if (world) {
      j["world"] = *world;
      j["holds"] = truth.count(*world) != 0;
    }
    out << j.dump() << "\n";
  } else {
    if (world) out << "world " << *world << ": " << (truth.count(*world) ? "true" : "false") << "\n";
    out << "holds at " << ids_text(holds) << "\n";
    out << "refuted at " << ids_text(refuted) << "\n";
    if (evaluable.size() != holds.size() + refuted.size())
      out << "evaluable at " << ids_text(evaluable) << "\n";
    out << (refuted.empty() ? "valid in the model" : "not valid in the model") << "\n";
  }
  return code;
}

int cmd_charmodel_build(const Config& cfg, unsigned vars, std::size_t cap, std::size_t depth,
                        bool step2_all, const std::string& out_path, std::ostream& out) {
  const SliceModel sm = build_slices(build_catalogue(vars, cap, cfg.agents), depth, step2_all);
  const json j = to_json(sm);
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + out_path);
    f << j.dump() << "\n";
  }
  if (cfg.quiet) return 0;
  if (cfg.as_json() && out_path.empty()) {
    out << j.dump() << "\n";
  } else if (cfg.as_json()) {
    out << j.at("slices").dump() << "\n";
  } else {
    out << "catalogue: " << sm.catalogue.entries.size() << " clusters (vars=" << vars << ", max cluster " << cap
        << ", agents=" << cfg.agents << ")\n";
    const auto counts = sm.layer_counts();
    for (std::size_t i = 0; i < counts.size(); ++i)
      out << "layer " << i + 1 << ": " << counts[i] << " clusters\n";
    out << "worlds: " << sm.model.frame.world_count() << "\n";
    if (!out_path.empty()) out << "written to " << out_path << "\n";
  }
  return 0;
}

int cmd_oracle_refute(const Config& cfg, const std::string& formula_arg, std::ostream& out) {
  const Formula f = parse_formula(input_text(formula_arg), cfg.agents);
  const FrameBounds b = cfg.frame_bounds();
  const auto cm = refute_formula(f, b);
  const int code = cm ? 1 : 0;
  if (cfg.quiet) return code;
  if (cfg.as_json()) {
    json j;
    j["formula"] = to_string(f);
    j["bounds"] = to_json(b);
    j["refuted"] = cm.has_value();
    if (cm) j["countermodel"] = to_json(*cm);
    out << j.dump() << "\n";
  } else if (cm) {
    out << "refuted at world " << cm->world << " (" << frame_bounds_text(b) << "):\n" << model_text(cm->model);
  } else {
    out << "no countermodel within " << frame_bounds_text(b) << "\n";
  }
  return code;
}

int cmd_oracle_admissible(const Config& cfg, const std::string& rule_arg, unsigned depth, unsigned vars,
                          std::ostream& out) {
  const Rule r = parse_rule(input_text(rule_arg), cfg.agents);
  const FrameBounds b = cfg.frame_bounds();
  const auto w = brute_not_admissible(r, depth, vars, b);
  const int code = w ? 1 : 0;
  if (cfg.quiet) return code;
  if (cfg.as_json()) {
    json j;
    j["rule"] = to_string(r);
    j["bounds"] = to_json(b);
    j["subst_depth"] = depth;
    j["subst_vars"] = vars;
    j["verdict"] = w ? "not-admissible" : "inconclusive";
    if (w) {
      json s = json::object();
      for (const auto& [v, g] : w->substitution) s["x" + std::to_string(v)] = to_string(g);
      j["substitution"] = s;
      j["countermodel"] = to_json(w->countermodel);
    }
    out << j.dump() << "\n";
  } else if (w) {
    out << "not admissible: substitution";
    for (const auto& [v, g] : w->substitution) out << " x" << v << " := " << to_string(g) << ";";
    out << "\nsubstituted conclusion refuted at world " << w->countermodel.world << ":\n"
        << model_text(w->countermodel.model);
  } else {
    out << "inconclusive: no substitution of depth <= " << depth << " over " << vars
        << " variables found within " << frame_bounds_text(b) << "\n";
  }
  return code;
}

int cmd_oracle_equivalid(const Config& cfg, const std::string& rule_arg, std::size_t random, unsigned seed,
                         std::ostream& out) {
  const FrameBounds b = cfg.frame_bounds();
  std::vector<Rule> rules;
  if (random > 0) {
    std::mt19937 rng(seed);
    for (std::size_t i = 0; i < random; ++i) rules.push_back(random_rule(rng, 2, 2, cfg.agents));
  } else {
    if (rule_arg.empty()) throw UsageError("equivalid needs a rule or --random N");
    rules.push_back(parse_rule(input_text(rule_arg), cfg.agents));
  }
  std::vector<std::string> failures;
  for (const auto& r : rules)
    if (!equivalid_nf(r, b)) failures.push_back(to_string(r));
  const int code = failures.empty() ? 0 : 1;
  if (cfg.quiet) return code;
  if (cfg.as_json()) {
    json j;
    if (random == 0) j["rule"] = to_string(rules.front());
    else j["random"] = json{{"count", random}, {"seed", seed}};
    j["bounds"] = to_json(b);
    j["checked"] = rules.size();
    j["equivalid"] = failures.empty();
    j["failures"] = failures;
    out << j.dump() << "\n";
  } else {
    out << rules.size() - failures.size() << "/" << rules.size() << " rules equivalid with their reduced form ("
        << frame_bounds_text(b) << ")\n";
    for (const auto& f : failures) out << "differs: " << f << "\n";
  }
  return code;
}

int cmd_check_witness(const Config& cfg, const std::string& rule_arg, const std::string& witness_arg,
                      std::ostream& out) {
  const Rule r = parse_rule(input_text(rule_arg), cfg.agents);
  const ReducedRule rr = reduce(r, cfg.agents);
  json j = read_json_file(witness_arg);
  if (j.contains("witness")) j = j.at("witness");
  else if (j.contains("verdict")) throw UsageError("input carries no witness");
  const Witness w = witness_from_json(rr, j);
  const WitnessReport rep = check_witness(rr, w, cfg.iso());
  const int code = rep.ok ? 0 : 1;
  if (cfg.quiet) return code;
  if (cfg.as_json()) {
    json o;
    o["ok"] = rep.ok;
    json vs = json::array();
    for (const auto& [c, d] : rep.violations) vs.push_back(json{{"condition", c}, {"detail", d}});
    o["violations"] = vs;
    out << o.dump() << "\n";
  } else {
    out << (rep.ok ? "witness ok" : "witness rejected") << "\n";
    for (const auto& [c, d] : rep.violations) out << "  condition " << c << ": " << d << "\n";
  }
  return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decision procedures for the temporal-epistemic logic LTK_r", "ltk"};
  app.require_subcommand(1);
  Config cfg;
  cfg.jobs = default_jobs();

  auto common = [&](CLI::App* sub) {
    sub->add_option("--agents,-k", cfg.agents, "number of agents")->capture_default_str();
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    sub->add_flag("--quiet,-q", cfg.quiet, "print nothing, report through the exit code");
  };
  auto search = [&](CLI::App* sub) {
    sub->add_option("--jobs,-j", cfg.jobs, "worker threads (default: $LTK_JOBS or 1)")
        ->check(CLI::Range(1u, 1024u));
    sub->add_option("--max-d", cfg.max_d, "largest index d of the main chain");
    sub->add_option("--max-cluster", cfg.max_cluster, "largest main-chain cluster");
    sub->add_option("--max-tail", cfg.max_tail, "longest tail");
    sub->add_option("--cond5", cfg.cond5, "reading of condition 5")->check(CLI::IsMember({"model", "frame"}))
        ->capture_default_str();
  };
  auto frames = [&](CLI::App* sub) {
    sub->add_option("--max-clusters", cfg.frame_clusters, "clusters per chain frame")->capture_default_str();
    sub->add_option("--max-size", cfg.frame_size, "worlds per cluster")->capture_default_str();
  };

  std::string text_a, text_b;
  std::size_t max_thetas = 4096;
  std::optional<WorldId> world;
  unsigned n_vars = 1, subst_depth = 1, subst_vars = 1, seed = 1;
  std::size_t cap = 2, depth = 2, random = 0;
  bool step2_all = false;
  std::string out_path;

  auto* nf = app.add_subcommand("nf", "print the reduced normal form of a rule");
  nf->add_option("rule", text_a, "rule text or @file")->required();
  nf->add_option("--max-thetas", max_thetas, "list disjuncts only up to this count")->capture_default_str();
  common(nf);

  auto* th = app.add_subcommand("theorem", "decide theoremhood of a formula");
  th->add_option("formula", text_a, "formula text or @file")->required();
  common(th);
  search(th);

  auto* ad = app.add_subcommand("admissible", "decide admissibility of a rule");
  ad->add_option("rule", text_a, "rule text or @file")->required();
  common(ad);
  search(ad);

  auto* mc = app.add_subcommand("mc", "evaluate a formula on a model given as JSON");
  mc->add_option("model", text_a, "model JSON file")->required();
  mc->add_option("formula", text_b, "formula text or @file")->required();
  mc->add_option("--world", world, "report truth at this world");
  common(mc);

  auto* cm = app.add_subcommand("charmodel", "characterizing-model slices");
  cm->require_subcommand(1);
  auto* build = cm->add_subcommand("build", "build slices and write them as JSON");
  build->add_option("--vars,-n", n_vars, "number of variables")->capture_default_str();
  build->add_option("--max-cluster", cap, "largest catalogue cluster")->capture_default_str();
  build->add_option("--depth", depth, "number of layers")->capture_default_str();
  build->add_option("--out,-o", out_path, "output file");
  build->add_flag("--step2-all", step2_all, "let layer 2 use every catalogue entry");
  common(build);

  auto* orc = app.add_subcommand("oracle", "brute-force baselines");
  orc->require_subcommand(1);
  auto* o_ref = orc->add_subcommand("refute", "search a countermodel over small chain frames");
  o_ref->add_option("formula", text_a, "formula text or @file")->required();
  common(o_ref);
  frames(o_ref);
  auto* o_adm = orc->add_subcommand("admissible", "search a refuting substitution");
  o_adm->add_option("rule", text_a, "rule text or @file")->required();
  o_adm->add_option("--subst-depth", subst_depth, "connective depth of substituted formulas")
      ->capture_default_str();
  o_adm->add_option("--subst-vars", subst_vars, "variables of substituted formulas")->capture_default_str();
  common(o_adm);
  frames(o_adm);
  auto* o_eq = orc->add_subcommand("equivalid", "compare a rule with its reduced form on small frames");
  o_eq->add_option("rule", text_a, "rule text or @file");
  o_eq->add_option("--random", random, "check this many random rules instead");
  o_eq->add_option("--seed", seed, "seed for --random")->capture_default_str();
  common(o_eq);
  frames(o_eq);

  auto* cw = app.add_subcommand("check-witness", "re-check a witness for a rule");
  cw->group("");
  cw->add_option("rule", text_a, "rule text or @file")->required();
  cw->add_option("witness", text_b, "witness JSON file (or admissible --format json output)")->required();
  cw->add_option("--cond5", cfg.cond5, "reading of condition 5")->check(CLI::IsMember({"model", "frame"}));
  common(cw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*nf) return cmd_nf(cfg, text_a, max_thetas, out);
    if (*th) return cmd_theorem(cfg, text_a, out);
    if (*ad) return cmd_admissible(cfg, text_a, out);
    if (*mc) return cmd_mc(cfg, text_a, text_b, world, out);
    if (*build) return cmd_charmodel_build(cfg, n_vars, cap, depth, step2_all, out_path, out);
    if (*o_ref) return cmd_oracle_refute(cfg, text_a, out);
    if (*o_adm) return cmd_oracle_admissible(cfg, text_a, subst_depth, subst_vars, out);
    if (*o_eq) return cmd_oracle_equivalid(cfg, text_a, random, seed, out);
    if (*cw) return cmd_check_witness(cfg, text_a, text_b, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace ltk
