#include "theta_table.hpp"

#include <algorithm>
#include <stdexcept>

namespace ltk::detail {

ThetaTable::ThetaTable(const ThetaSet& set) : shape_(set.shape()) {
  if (shape_.vars > 64) throw std::invalid_argument("search supports at most 64 rule variables");
  const std::size_t stride = shape_.stride();
  std::vector<std::size_t> lit_slot;   // index into constrained() of each literal
  lit_slot.assign(shape_.vars, static_cast<std::size_t>(-1));
  std::vector<std::size_t> tied_slot;
  const auto& cons = set.constrained();
  for (std::size_t k = 0; k < cons.size(); ++k) {
    const std::size_t pos = cons[k];
    const unsigned var = static_cast<unsigned>(pos / stride);
    const unsigned slot = static_cast<unsigned>(pos % stride);
    if (slot == 0) {
      lit_slot[var] = k;
    } else {
      tied_.push_back({var, slot});
      tied_slot.push_back(k);
    }
  }
  for (unsigned i = 0; i < shape_.vars; ++i)
    if (lit_slot[i] == static_cast<std::size_t>(-1))
      throw std::invalid_argument("theta set leaves a literal unconstrained");
  if (tied_.size() > 64) throw std::invalid_argument("too many constrained diamond atoms");
  for (const auto& pat : set.core()) {
    Lits lit = 0;
    for (unsigned i = 0; i < shape_.vars; ++i)
      if (pat[lit_slot[i]] == 0) lit |= Lits{1} << i;
    std::uint64_t tied = 0;
    for (std::size_t t = 0; t < tied_slot.size(); ++t)
      if (pat[tied_slot[t]] == 0) tied |= std::uint64_t{1} << t;
    allowed_[lit].push_back(tied);
  }
  for (auto& [lit, v] : allowed_) {
    std::sort(v.begin(), v.end());
    patterns_.push_back(lit);
  }
  std::sort(patterns_.begin(), patterns_.end());
}

std::uint64_t ThetaTable::tied_bits(const Diamonds& d) const {
  std::uint64_t bits = 0;
  for (std::size_t t = 0; t < tied_.size(); ++t) {
    const Tied& td = tied_[t];
    Lits source = td.slot == 1 ? d.time : td.slot == 2 ? d.env : d.agent[td.slot - 3];
    if ((source >> td.var) & 1u) bits |= std::uint64_t{1} << t;
  }
  return bits;
}

bool ThetaTable::admits(Lits lit, const Diamonds& d) const {
  auto it = allowed_.find(lit);
  if (it == allowed_.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(), tied_bits(d));
}

Theta ThetaTable::theta_of(Lits lit, const Diamonds& d) const {
  std::vector<std::uint8_t> signs(shape_.width());
  for (unsigned i = 0; i < shape_.vars; ++i) {
    auto sign = [&](Lits v) { return static_cast<std::uint8_t>(((v >> i) & 1u) ? 0 : 1); };
    signs[shape_.lit(i)] = sign(lit);
    signs[shape_.dia_t(i)] = sign(d.time);
    signs[shape_.dia_e(i)] = sign(d.env);
    for (unsigned l = 1; l <= shape_.agents; ++l) signs[shape_.dia_agent(i, l)] = sign(d.agent[l - 1]);
  }
  return Theta(shape_, std::move(signs));
}

Diamonds cluster_diamonds(const ClusterShape& shape, const std::vector<Lits>& lits,
                          std::size_t world, Lits all, Lits next_all) {
  Diamonds d;
  d.time = all | next_all;
  d.env = all;
  d.agent.resize(shape.block_of.size());
  for (std::size_t l = 0; l < shape.block_of.size(); ++l) {
    Lits acc = 0;
    for (std::size_t j = 0; j < shape.size; ++j)
      if (shape.block_of[l][j] == shape.block_of[l][world]) acc |= lits[j];
    d.agent[l] = acc;
  }
  return d;
}

std::vector<ClusterAssignment> valid_assignments(const ThetaTable& table, const ClusterShape& shape,
                                                 Lits next_all) {
  std::vector<ClusterAssignment> out;
  const auto& pats = table.literal_patterns();
  if (pats.empty()) return out;
  std::vector<std::size_t> odo(shape.size, 0);
  std::vector<Lits> lits(shape.size);
  while (true) {
    Lits all = 0;
    for (std::size_t j = 0; j < shape.size; ++j) {
      lits[j] = pats[odo[j]];
      all |= lits[j];
    }
    bool ok = true;
    bool x0 = false;
    for (std::size_t j = 0; j < shape.size && ok; ++j) {
      ok = table.admits(lits[j], cluster_diamonds(shape, lits, j, all, next_all));
      x0 = x0 || ThetaTable::x0_false(lits[j]);
    }
    if (ok) out.push_back({lits, all, x0});
    std::size_t k = shape.size;
    while (k > 0) {
      --k;
      if (++odo[k] < pats.size()) break;
      odo[k] = 0;
      if (k == 0) return out;
    }
    if (shape.size == 0) return out;
  }
}

ClusterShape cluster_shape(const Frame& frame, std::size_t cluster) {
  ClusterShape s;
  const auto& mem = frame.members(cluster);
  s.size = mem.size();
  s.block_of.resize(frame.agents());
  for (unsigned l = 1; l <= frame.agents(); ++l)
    for (std::size_t d : mem) s.block_of[l - 1].push_back(frame.block_of(d, l));
  return s;
}

}  // namespace ltk::detail
