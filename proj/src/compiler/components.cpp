#include <algorithm>
#include <cstdint>
#include <numeric>

#include "smtkc/compiler.hpp"

namespace smtkc {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

bool satisfied(const Clause& c, const PartialAssignment& a) {
  return std::any_of(c.begin(), c.end(), [&](Literal l) { return value_of(a, l) == 1; });
}

}  // namespace

std::vector<Component> split_components(const ClauseDb& db, const AtomMap& map, const PartialAssignment& a,
                                        std::span<const Literal> trail, const CompileConfig& cfg,
                                        const Component* within) {
  const bool real_links = cfg.mode == CompileMode::Lazy;
  const std::size_t nv = static_cast<std::size_t>(db.num_vars);
  auto real_node = [&](RealVar r) { return nv + 1 + static_cast<std::size_t>(r); };
  UnionFind uf(nv + 1 + static_cast<std::size_t>(map.num_real_vars()));

  std::vector<std::size_t> residual;
  std::vector<bool> member(nv + 1, false);
  auto consider_clause = [&](std::size_t ci) {
    const Clause& c = db.clauses[ci];
    if (satisfied(c, a)) return;
    int first = 0;
    for (Literal l : c) {
      if (value_of(a, l) != 0) continue;
      member[static_cast<std::size_t>(l.var)] = true;
      if (first == 0)
        first = l.var;
      else
        uf.unite(static_cast<std::size_t>(first), static_cast<std::size_t>(l.var));
    }
    if (first != 0) residual.push_back(ci);
  };
  auto consider_atom = [&](int v) {
    if (v <= db.num_atom_vars && a[static_cast<std::size_t>(v)] == 0) member[static_cast<std::size_t>(v)] = true;
  };
  if (within) {
    for (std::size_t ci : within->clauses) consider_clause(ci);
    for (int v : within->vars) consider_atom(v);
  } else {
    for (std::size_t ci = 0; ci < db.clauses.size(); ++ci) consider_clause(ci);
    for (int v = 1; v <= db.num_atom_vars; ++v) consider_atom(v);
  }

  std::vector<int> vars;
  for (std::size_t v = 1; v <= nv; ++v)
    if (member[v]) vars.push_back(static_cast<int>(v));
  if (vars.empty()) return {};

  if (real_links) {
    for (int v : vars)
      for (RealVar r : map.real_vars(v)) uf.unite(static_cast<std::size_t>(v), real_node(r));
    for (Literal l : trail) {
      const std::vector<RealVar>& rs = map.real_vars(l.var);
      for (std::size_t i = 1; i < rs.size(); ++i) uf.unite(real_node(rs[0]), real_node(rs[i]));
    }
  }
  if (!cfg.components)
    for (int v : vars) uf.unite(static_cast<std::size_t>(vars.front()), static_cast<std::size_t>(v));

  std::vector<Component> out;
  std::vector<std::size_t> slot(nv + 1 + static_cast<std::size_t>(map.num_real_vars()), SIZE_MAX);
  for (int v : vars) {
    std::size_t root = uf.find(static_cast<std::size_t>(v));
    if (slot[root] == SIZE_MAX) {
      slot[root] = out.size();
      out.emplace_back();
    }
    out[slot[root]].vars.push_back(v);
  }
  for (std::size_t ci : residual) {
    for (Literal l : db.clauses[ci]) {
      if (value_of(a, l) != 0) continue;
      out[slot[uf.find(static_cast<std::size_t>(l.var))]].clauses.push_back(ci);
      break;
    }
  }
  if (real_links) {
    for (RealVar r = 0; r < map.num_real_vars(); ++r) {
      std::size_t s = slot[uf.find(real_node(r))];
      if (s != SIZE_MAX) out[s].real_vars.push_back(r);
    }
    for (Literal l : trail) {
      const std::vector<RealVar>& rs = map.real_vars(l.var);
      if (rs.empty()) continue;
      std::size_t s = slot[uf.find(real_node(rs.front()))];
      if (s != SIZE_MAX) out[s].trail.push_back(l);
    }
  }
  for (Component& c : out) {
    std::sort(c.clauses.begin(), c.clauses.end());
    std::sort(c.trail.begin(), c.trail.end());
  }
  return out;
}

Literal decide(const ClauseDb& db, const PartialAssignment& a, const Component& comp, Heuristic h) {
  auto unassigned = [&](int v) { return a.at(static_cast<std::size_t>(v)) == 0; };
  if (h == Heuristic::FixedOrder) {
    for (int v : comp.vars)
      if (unassigned(v)) return {v, true};
    throw NoUnassigned("decide: component has no unassigned variable");
  }
  std::vector<std::size_t> occurrences(static_cast<std::size_t>(db.num_vars) + 1, 0);
  for (std::size_t ci : comp.clauses) {
    const Clause& c = db.clauses[ci];
    if (satisfied(c, a)) continue;
    for (Literal l : c)
      if (unassigned(l.var)) ++occurrences[static_cast<std::size_t>(l.var)];
  }
  int best = 0;
  for (int v : comp.vars) {
    if (!unassigned(v)) continue;
    if (best == 0 || occurrences[static_cast<std::size_t>(v)] > occurrences[static_cast<std::size_t>(best)]) best = v;
  }
  if (best == 0) throw NoUnassigned("decide: component has no unassigned variable");
  return {best, true};
}

Clause learn_theory_clause(std::span<const Literal> core) {
  Clause c;
  c.reserve(core.size());
  for (Literal l : core) c.push_back(~l);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

std::string make_cache_key(const ClauseDb& db, const PartialAssignment& a, const Component& comp) {
  std::vector<std::vector<int>> residual;
  residual.reserve(comp.clauses.size());
  for (std::size_t ci : comp.clauses) {
    std::vector<int> lits;
    for (Literal l : db.clauses[ci])
      if (value_of(a, l) == 0) lits.push_back(l.dimacs());
    std::sort(lits.begin(), lits.end());
    residual.push_back(std::move(lits));
  }
  std::sort(residual.begin(), residual.end());
  residual.erase(std::unique(residual.begin(), residual.end()), residual.end());

  std::string key = "v";
  for (int v : comp.vars) key += ' ' + std::to_string(v);
  key += "|c";
  for (const std::vector<int>& c : residual) {
    for (int d : c) key += ' ' + std::to_string(d);
    key += " 0";
  }
  key += "|t";
  for (Literal l : comp.trail) key += ' ' + std::to_string(l.dimacs());
  return key;
}

std::optional<NodeId> ComponentCache::lookup(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ComponentCache::store(const std::string& key, NodeId node) { entries_.emplace(key, node); }

}  // namespace smtkc
