#include "ltk/normal_form.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "theta_table.hpp"

namespace ltk {

Formula ThetaShape::atom(std::size_t pos) const {
  const unsigned var = static_cast<unsigned>(pos / stride());
  const std::size_t slot = pos % stride();
  Formula x = Formula::var(var);
  if (slot == 0) return x;
  if (slot == 1) return Formula::dia_t(x);
  if (slot == 2) return Formula::dia_e(x);
  return Formula::dia_agent(static_cast<unsigned>(slot - 2), x);
}

std::string ThetaShape::atom_name(std::size_t pos) const {
  const std::string x = "x" + std::to_string(pos / stride());
  const std::size_t slot = pos % stride();
  if (slot == 0) return x;
  if (slot == 1) return "<T>" + x;
  if (slot == 2) return "<E>" + x;
  return "<A" + std::to_string(slot - 2) + ">" + x;
}

Theta::Theta(ThetaShape shape, std::vector<std::uint8_t> signs)
    : shape_(shape), signs_(std::move(signs)) {
  if (signs_.size() != shape_.width()) throw std::invalid_argument("theta width mismatch");
  for (auto s : signs_)
    if (s > 1) throw std::invalid_argument("theta signs must be 0 or 1");
}

Formula Theta::to_formula() const {
  std::optional<Formula> acc;
  for (std::size_t p = 0; p < signs_.size(); ++p) {
    Formula a = shape_.atom(p);
    if (signs_[p]) a = Formula::negation(a);
    acc = acc ? Formula::conj(*acc, a) : a;
  }
  return acc ? *acc : Formula::top();
}

std::string Theta::to_text() const {
  std::string out;
  for (std::size_t p = 0; p < signs_.size(); ++p) {
    if (p) out += ' ';
    out += signs_[p] ? '-' : '+';
    out += shape_.atom_name(p);
  }
  return out;
}

// ── ThetaSet ────────────────────────────────────────────────────────────────

ThetaSet::ThetaSet(ThetaShape shape, std::vector<std::size_t> constrained,
                   std::vector<std::vector<std::uint8_t>> core)
    : shape_(shape), constrained_(std::move(constrained)), core_(std::move(core)) {
  std::sort(constrained_.begin(), constrained_.end());
  if (std::adjacent_find(constrained_.begin(), constrained_.end()) != constrained_.end())
    throw std::invalid_argument("constrained positions repeat");
  is_constrained_.assign(shape_.width(), 0);
  for (std::size_t p : constrained_) {
    if (p >= shape_.width()) throw std::invalid_argument("constrained position out of range");
    is_constrained_[p] = 1;
  }
  for (const auto& c : core_)
    if (c.size() != constrained_.size()) throw std::invalid_argument("core pattern width mismatch");
  std::sort(core_.begin(), core_.end());
  core_.erase(std::unique(core_.begin(), core_.end()), core_.end());
}

BigCount ThetaSet::size() const {
  BigCount n = core_.size();
  return n << static_cast<unsigned>(shape_.width() - constrained_.size());
}

std::vector<std::size_t> ThetaSet::free_positions() const {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < shape_.width(); ++p)
    if (!is_constrained_[p]) out.push_back(p);
  return out;
}

std::vector<std::uint8_t> ThetaSet::project(const Theta& t) const {
  std::vector<std::uint8_t> out;
  out.reserve(constrained_.size());
  for (std::size_t p : constrained_) out.push_back(t.signs()[p]);
  return out;
}

bool ThetaSet::contains(const Theta& t) const {
  if (!(t.shape() == shape_)) return false;
  return std::binary_search(core_.begin(), core_.end(), project(t));
}

// Counting members below t: walk the positions; wherever t has sign 1, every
// member agreeing with t so far and carrying 0 here precedes t.
BigCount ThetaSet::rank(const Theta& t) const {
  if (!contains(t)) throw std::invalid_argument("theta is not a member of the set");
  const std::size_t width = shape_.width();
  std::vector<std::size_t> free_after(width + 1, 0);
  for (std::size_t p = width; p-- > 0;) free_after[p] = free_after[p + 1] + (is_constrained_[p] ? 0 : 1);
  std::vector<const std::vector<std::uint8_t>*> cand;
  for (const auto& c : core_) cand.push_back(&c);
  BigCount r = 0;
  std::size_t ci = 0;
  for (std::size_t p = 0; p < width; ++p) {
    const std::uint8_t bit = t.signs()[p];
    const unsigned tail = static_cast<unsigned>(free_after[p + 1]);
    if (is_constrained_[p]) {
      if (bit == 1) {
        std::size_t zeros = std::count_if(cand.begin(), cand.end(), [&](auto* c) { return (*c)[ci] == 0; });
        r += BigCount(zeros) << tail;
      }
      std::erase_if(cand, [&](auto* c) { return (*c)[ci] != bit; });
      ++ci;
    } else if (bit == 1) {
      r += BigCount(cand.size()) << tail;
    }
  }
  return r;
}

Theta ThetaSet::unrank(const BigCount& index) const {
  if (index < 0 || index >= size()) throw std::out_of_range("theta index out of range");
  const std::size_t width = shape_.width();
  std::vector<std::size_t> free_after(width + 1, 0);
  for (std::size_t p = width; p-- > 0;) free_after[p] = free_after[p + 1] + (is_constrained_[p] ? 0 : 1);
  std::vector<const std::vector<std::uint8_t>*> cand;
  for (const auto& c : core_) cand.push_back(&c);
  BigCount rest = index;
  std::vector<std::uint8_t> signs(width);
  std::size_t ci = 0;
  for (std::size_t p = 0; p < width; ++p) {
    const unsigned tail = static_cast<unsigned>(free_after[p + 1]);
    if (is_constrained_[p]) {
      std::size_t zeros = std::count_if(cand.begin(), cand.end(), [&](auto* c) { return (*c)[ci] == 0; });
      BigCount below = BigCount(zeros) << tail;
      std::uint8_t bit = 0;
      if (rest >= below) {
        rest -= below;
        bit = 1;
      }
      std::erase_if(cand, [&](auto* c) { return (*c)[ci] != bit; });
      signs[p] = bit;
      ++ci;
    } else {
      BigCount below = BigCount(cand.size()) << tail;
      if (rest >= below) {
        rest -= below;
        signs[p] = 1;
      }
    }
  }
  return Theta(shape_, std::move(signs));
}

// ── reduce ──────────────────────────────────────────────────────────────────

namespace {

struct Renaming {
  std::vector<Formula> order;                 // children before parents
  std::map<Formula, unsigned> var_of;         // final numbering
};

void post_order(const Formula& f, std::set<Formula>& seen, std::vector<Formula>& out) {
  if (seen.count(f)) return;
  if (f.op() != Op::Var && f.op() != Op::Top && f.op() != Op::Bottom) {
    post_order(f.lhs(), seen, out);
    if (f.is_binary()) post_order(f.rhs(), seen, out);
  }
  seen.insert(f);
  out.push_back(f);
}

}  // namespace

ReducedRule reduce(const Rule& rule, unsigned agents) {
  if (rule.premises.empty()) throw std::invalid_argument("rule needs at least one premise");
  for (const auto& p : rule.premises)
    if (max_agent(p) > agents) throw std::invalid_argument("premise mentions an agent beyond k");
  if (max_agent(rule.conclusion) > agents) throw std::invalid_argument("conclusion mentions an agent beyond k");

  Formula phi = rule.premises.front();
  for (std::size_t i = 1; i < rule.premises.size(); ++i) phi = Formula::conj(phi, rule.premises[i]);

  std::set<Formula> seen;
  std::vector<Formula> order;
  post_order(phi, seen, order);
  post_order(rule.conclusion, seen, order);
  const std::size_t base_count = order.size();
  for (std::size_t i = 0; i < base_count; ++i) {
    if (!order[i].is_box()) continue;
    Formula companion = Formula::negation(order[i].lhs());
    if (seen.insert(companion).second) order.push_back(companion);
  }

  std::map<Formula, unsigned> var_of;
  std::vector<Formula> origin{rule.conclusion};
  var_of[rule.conclusion] = 0;
  for (const auto& f : order)
    if (!var_of.count(f)) {
      var_of[f] = static_cast<unsigned>(origin.size());
      origin.push_back(f);
    }

  ReducedRule rr;
  rr.var_count = static_cast<unsigned>(origin.size());
  rr.agents = agents;
  rr.origin = origin;
  rr.premise_var = var_of.at(phi);
  const ThetaShape shape = rr.shape();

  // Constrained positions: every literal plus, for each box, the diamond of
  // the companion variable that defines it.
  std::vector<std::size_t> constrained;
  for (unsigned i = 0; i < rr.var_count; ++i) constrained.push_back(shape.lit(i));
  std::map<unsigned, std::size_t> tied_of_box;   // box var -> position
  for (const auto& f : order) {
    if (!f.is_box()) continue;
    const unsigned comp = var_of.at(Formula::negation(f.lhs()));
    std::size_t pos = f.op() == Op::BoxT   ? shape.dia_t(comp)
                      : f.op() == Op::BoxE ? shape.dia_e(comp)
                                           : shape.dia_agent(comp, f.index());
    tied_of_box[var_of.at(f)] = pos;
    constrained.push_back(pos);
  }
  std::sort(constrained.begin(), constrained.end());
  std::map<std::size_t, std::size_t> slot_of_pos;
  for (std::size_t k = 0; k < constrained.size(); ++k) slot_of_pos[constrained[k]] = k;

  std::vector<unsigned> base_vars;
  for (const auto& f : order)
    if (f.op() == Op::Var) base_vars.push_back(var_of.at(f));
  std::vector<std::pair<unsigned, std::size_t>> boxes(tied_of_box.begin(), tied_of_box.end());
  const std::size_t choices = base_vars.size() + boxes.size();
  if (choices > 26) throw std::invalid_argument("rule too large for normal-form enumeration");

  std::vector<std::vector<std::uint8_t>> core;
  std::vector<char> truth(rr.var_count);
  std::map<unsigned, char> tied_truth;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << choices); ++code) {
    for (std::size_t b = 0; b < base_vars.size(); ++b) truth[base_vars[b]] = (code >> b) & 1u;
    for (std::size_t b = 0; b < boxes.size(); ++b)
      tied_truth[boxes[b].first] = (code >> (base_vars.size() + b)) & 1u;
    for (const auto& f : order) {
      const unsigned v = var_of.at(f);
      switch (f.op()) {
        case Op::Var: break;
        case Op::Top: truth[v] = 1; break;
        case Op::Bottom: truth[v] = 0; break;
        case Op::Not: truth[v] = !truth[var_of.at(f.lhs())]; break;
        case Op::And: truth[v] = truth[var_of.at(f.lhs())] && truth[var_of.at(f.rhs())]; break;
        case Op::Or: truth[v] = truth[var_of.at(f.lhs())] || truth[var_of.at(f.rhs())]; break;
        case Op::Implies: truth[v] = !truth[var_of.at(f.lhs())] || truth[var_of.at(f.rhs())]; break;
        default: truth[v] = !tied_truth[v]; break;   // [X]B <-> ~<X>~B
      }
    }
    if (!truth[rr.premise_var]) continue;
    std::vector<std::uint8_t> pat(constrained.size());
    for (unsigned i = 0; i < rr.var_count; ++i) pat[slot_of_pos[shape.lit(i)]] = truth[i] ? 0 : 1;
    for (const auto& [box_var, pos] : boxes) pat[slot_of_pos[pos]] = tied_truth[box_var] ? 0 : 1;
    core.push_back(std::move(pat));
  }
  rr.thetas = ThetaSet(shape, std::move(constrained), std::move(core));
  return rr;
}

Rule materialize(const ReducedRule& rr, std::size_t max_thetas) {
  const BigCount s = rr.thetas.size();
  if (s > max_thetas)
    throw std::length_error("reduced rule has " + s.str() + " disjuncts, above the limit " +
                            std::to_string(max_thetas));
  std::optional<Formula> premise;
  for (BigCount j = 0; j < s; ++j) {
    Formula t = rr.thetas.unrank(j).to_formula();
    premise = premise ? Formula::disj(*premise, t) : t;
  }
  return Rule{{premise ? *premise : Formula::bottom()}, Formula::var(0)};
}

std::map<WorldId, Theta> realised_thetas(const Model& model, ThetaShape shape) {
  std::vector<Formula> atoms;
  for (std::size_t p = 0; p < shape.width(); ++p) atoms.push_back(shape.atom(p));
  Valuation val = model.valuation;
  for (unsigned i = 0; i < shape.vars; ++i)
    if (!val.count(i)) throw ModelError("valuation does not cover x" + std::to_string(i));
  Evaluator ev(model.frame, atoms);
  ev.run(val);
  std::map<WorldId, Theta> out;
  for (std::size_t d = 0; d < model.frame.world_count(); ++d) {
    std::vector<std::uint8_t> signs(shape.width());
    for (std::size_t p = 0; p < shape.width(); ++p) signs[p] = ev.result(p).test(d) ? 0 : 1;
    out.emplace(model.frame.id_at(d), Theta(shape, std::move(signs)));
  }
  return out;
}

bool theta_satisfied(const Model& model, WorldId w, const Theta& t) {
  model.frame.index_of(w);
  return realised_thetas(model, t.shape()).at(w) == t;
}

bool rule_valid_on_frame(const Frame& frame, const ReducedRule& rr) {
  if (!frame.is_chain()) throw ModelError("reduced-rule validity is implemented for chain frames");
  if (frame.agents() != rr.agents) throw ModelError("frame and rule disagree on the agent count");
  if (rr.thetas.empty()) return true;
  detail::ThetaTable table(rr.thetas);
  const std::size_t n = frame.cluster_count();
  std::vector<detail::ClusterShape> shapes;
  for (std::size_t c = 0; c < n; ++c) shapes.push_back(detail::cluster_shape(frame, c));

  // Is there an assignment of clusters c, c-1, ..., 0 (cluster c seeing the
  // union `next_all`) with every world realising a member and x0 failing
  // somewhere?  Failures are memoised per state.
  std::set<std::tuple<std::size_t, detail::Lits, bool>> dead;
  std::map<std::pair<std::size_t, detail::Lits>, std::vector<detail::ClusterAssignment>> cache;
  std::function<bool(std::size_t, detail::Lits, bool)> refutable = [&](std::size_t c, detail::Lits next_all,
                                                                       bool found) -> bool {
    auto key = std::make_tuple(c, next_all, found);
    if (dead.count(key)) return false;
    auto ck = std::make_pair(c, next_all);
    auto it = cache.find(ck);
    if (it == cache.end()) it = cache.emplace(ck, detail::valid_assignments(table, shapes[c], next_all)).first;
    for (const auto& a : it->second) {
      const bool f = found || a.x0_false;
      if (c == 0 ? f : refutable(c - 1, a.all, f)) return true;
    }
    dead.insert(key);
    return false;
  };
  return !refutable(n - 1, 0, false);
}

std::string to_text(const ReducedRule& rr, std::size_t max_thetas) {
  std::string out = "m = " + std::to_string(rr.var_count) + ", k = " + std::to_string(rr.agents) +
                    ", thetas = " + rr.thetas.size().str() + "\n";
  for (unsigned i = 0; i < rr.var_count; ++i)
    out += "x" + std::to_string(i) + " := " + to_string(rr.origin[i], VarStyle::X) + "\n";
  const BigCount s = rr.thetas.size();
  if (s <= max_thetas) {
    for (BigCount j = 0; j < s; ++j)
      out += "theta[" + j.str() + "]: " + rr.thetas.unrank(j).to_text() + "\n";
  } else {
    const ThetaShape shape = rr.shape();
    out += "(disjuncts not listed; constrained patterns follow, free atoms range over both signs)\n";
    for (std::size_t c = 0; c < rr.thetas.core().size(); ++c) {
      out += "core[" + std::to_string(c) + "]:";
      for (std::size_t k = 0; k < rr.thetas.constrained().size(); ++k)
        out += std::string(" ") + (rr.thetas.core()[c][k] ? '-' : '+') +
               shape.atom_name(rr.thetas.constrained()[k]);
      out += "\n";
    }
  }
  return out;
}

}  // namespace ltk
