#include <algorithm>
#include <optional>
#include <span>

#include "smtkc/ddnnf.hpp"
#include "smtkc/lra_solver.hpp"

namespace smtkc {

namespace {

// Atom variables of a node: the prefix of its ascending var list.
std::span<const int> atom_scope(const DdnnfGraph& g, NodeId id) {
  const std::vector<int>& vs = g.vars(id);
  auto end = std::upper_bound(vs.begin(), vs.end(), g.num_atom_vars());
  return {vs.data(), static_cast<std::size_t>(end - vs.begin())};
}

std::string describe(NodeId id, const std::string& what) { return "node " + std::to_string(id) + ": " + what; }

void check_decomposability(const DdnnfGraph& g, const std::vector<NodeId>& live, std::vector<Violation>& out) {
  std::vector<NodeId> stamp(static_cast<std::size_t>(g.num_vars()) + 1, 0);
  for (NodeId id : live) {
    const Node& n = g.node(id);
    if (n.kind != NodeKind::And) continue;
    NodeId mark = id + 1;
    for (NodeId c : n.children) {
      bool clash = false;
      int var = 0;
      for (int v : g.vars(c)) {
        if (stamp[v] == mark) {
          clash = true;
          var = v;
          break;
        }
        stamp[v] = mark;
      }
      if (clash) {
        out.push_back({Violation::Kind::Decomposability, id, describe(id, "variable " + std::to_string(var) + " shared by conjuncts"), {}});
        break;
      }
    }
  }
}

void check_totality(const DdnnfGraph& g, const std::vector<NodeId>& live, std::vector<Violation>& out) {
  for (NodeId id : live) {
    const Node& n = g.node(id);
    if (n.kind != NodeKind::Or) continue;
    std::optional<std::span<const int>> first;
    for (NodeId c : n.children) {
      if (g.node(c).kind == NodeKind::False) continue;
      std::span<const int> s = atom_scope(g, c);
      if (!first) {
        first = s;
      } else if (!std::equal(first->begin(), first->end(), s.begin(), s.end())) {
        out.push_back({Violation::Kind::Totality, id, describe(id, "disjuncts mention different atoms"), {}});
        break;
      }
    }
  }
  NodeId root = g.root();
  if (g.node(root).kind == NodeKind::False) return;
  if (atom_scope(g, root).size() != static_cast<std::size_t>(g.num_atom_vars()))
    out.push_back({Violation::Kind::Totality, root, describe(root, "root does not assign every atom"), {}});
}

// Literal of `var` among the top-level conjuncts of a node.
std::optional<Literal> top_literal(const DdnnfGraph& g, NodeId id, int var) {
  const Node& n = g.node(id);
  if (n.kind == NodeKind::Lit) return n.lit.var == var ? std::optional<Literal>(n.lit) : std::nullopt;
  if (n.kind != NodeKind::And) return std::nullopt;
  for (NodeId c : n.children) {
    const Node& k = g.node(c);
    if (k.kind == NodeKind::Lit && k.lit.var == var) return k.lit;
  }
  return std::nullopt;
}

bool decided_on(const DdnnfGraph& g, const Node& n, int var) {
  std::vector<bool> seen_polarity(2, false);
  for (NodeId c : n.children) {
    if (g.node(c).kind == NodeKind::False) continue;
    std::optional<Literal> l = top_literal(g, c, var);
    if (!l || seen_polarity[l->positive]) return false;
    seen_polarity[l->positive] = true;
  }
  return true;
}

void check_determinism(const DdnnfGraph& g, const std::vector<NodeId>& live, std::vector<Violation>& out) {
  for (NodeId id : live) {
    const Node& n = g.node(id);
    if (n.kind != NodeKind::Or) continue;
    std::size_t live_kids = std::count_if(n.children.begin(), n.children.end(),
                                          [&](NodeId c) { return g.node(c).kind != NodeKind::False; });
    if (live_kids < 2) continue;
    bool ok = false;
    if (n.decision_var != 0) {
      ok = decided_on(g, n, n.decision_var);
    } else {
      for (int v : g.vars(n.children.front())) {
        if (decided_on(g, n, v)) {
          ok = true;
          break;
        }
      }
    }
    if (!ok)
      out.push_back({Violation::Kind::Determinism, id,
                     describe(id, n.decision_var != 0
                                      ? "disjuncts do not decide variable " + std::to_string(n.decision_var)
                                      : "no complementary decision literal among disjuncts"),
                     {}});
  }
}

void require_total(const DdnnfGraph& g) {
  std::vector<NodeId> live = g.reachable();
  std::vector<Violation> v;
  check_decomposability(g, live, v);
  check_totality(g, live, v);
  if (!v.empty()) throw NotTotal(v.front().detail);
}

std::vector<Assignment> merge_product(const std::vector<Assignment>& a, const std::vector<Assignment>& b, std::size_t cap) {
  std::vector<Assignment> out;
  for (const Assignment& x : a) {
    for (const Assignment& y : b) {
      if (out.size() >= cap) return out;
      Assignment m;
      m.reserve(x.size() + y.size());
      std::merge(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(m));
      out.push_back(std::move(m));
    }
  }
  return out;
}

}  // namespace

void WeightMap::set(Literal lit, Rational w) {
  if (sgn(w) < 0) throw std::invalid_argument("WeightMap: negative weight");
  weights_[lit] = std::move(w);
}

Rational WeightMap::weight(Literal lit) const {
  auto it = weights_.find(lit);
  if (it != weights_.end()) return it->second;
  if (strict_) throw MissingWeight("no weight for literal " + std::to_string(lit.dimacs()));
  return 1;
}

BigInt count(const DdnnfGraph& g) {
  require_total(g);
  std::vector<BigInt> val(g.size());
  for (NodeId id = 0; id < g.size(); ++id) {
    const Node& n = g.node(id);
    switch (n.kind) {
      case NodeKind::True:
      case NodeKind::Lit: val[id] = 1; break;
      case NodeKind::False: val[id] = 0; break;
      case NodeKind::And:
        val[id] = 1;
        for (NodeId c : n.children) val[id] *= val[c];
        break;
      case NodeKind::Or:
        val[id] = 0;
        for (NodeId c : n.children) val[id] += val[c];
        break;
    }
  }
  return val[g.root()];
}

Rational weighted_count(const DdnnfGraph& g, const WeightMap& w) {
  require_total(g);
  std::vector<Rational> val(g.size());
  for (NodeId id = 0; id < g.size(); ++id) {
    const Node& n = g.node(id);
    switch (n.kind) {
      case NodeKind::True: val[id] = 1; break;
      case NodeKind::False: val[id] = 0; break;
      case NodeKind::Lit: val[id] = g.is_aux(n.lit.var) ? Rational(1) : w.weight(n.lit); break;
      case NodeKind::And:
        val[id] = 1;
        for (NodeId c : n.children) val[id] *= val[c];
        break;
      case NodeKind::Or:
        val[id] = 0;
        for (NodeId c : n.children) val[id] += val[c];
        break;
    }
  }
  return val[g.root()];
}

std::vector<Assignment> enumerate(const DdnnfGraph& g, std::size_t cap) {
  require_total(g);
  if (cap == 0) return {};
  std::vector<NodeId> live = g.reachable();
  std::vector<std::vector<Assignment>> memo(g.size());
  for (NodeId id : live) {
    const Node& n = g.node(id);
    std::vector<Assignment>& out = memo[id];
    switch (n.kind) {
      case NodeKind::True: out.emplace_back(); break;
      case NodeKind::False: break;
      case NodeKind::Lit:
        out.emplace_back();
        if (!g.is_aux(n.lit.var)) out.back().push_back(n.lit);
        break;
      case NodeKind::And:
        out.emplace_back();
        for (NodeId c : n.children) out = merge_product(out, memo[c], cap);
        break;
      case NodeKind::Or:
        for (NodeId c : n.children)
          for (const Assignment& a : memo[c]) {
            if (out.size() >= cap) break;
            out.push_back(a);
          }
        break;
    }
  }
  return std::move(memo[g.root()]);
}

std::size_t ValidationReport::count(Violation::Kind kind) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; }));
}

const char* to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::Determinism: return "determinism";
    case Violation::Kind::Decomposability: return "decomposability";
    case Violation::Kind::Totality: return "totality";
    case Violation::Kind::TheoryUnsat: return "theory-unsat";
  }
  return "?";
}

ValidationReport validate(const DdnnfGraph& g, ValidationLevel level, std::size_t theory_bound) {
  ValidationReport r;
  std::vector<NodeId> live = g.reachable();
  check_determinism(g, live, r.violations);
  check_decomposability(g, live, r.violations);
  check_totality(g, live, r.violations);
  if (level != ValidationLevel::Theory) return r;
  if (!r.ok()) {
    r.note = "theory check skipped: structural violations";
    return r;
  }
  if (!g.atom_map()) {
    r.note = "theory check skipped: no atom map";
    return r;
  }
  BigInt total = count(g);
  if (total > theory_bound) {
    r.note = "theory check skipped: " + total.get_str() + " assignments exceed bound " + std::to_string(theory_bound);
    return r;
  }
  const AtomMap& map = *g.atom_map();
  for (Assignment& a : enumerate(g, theory_bound)) {
    std::vector<Literal> linear;
    for (Literal l : a)
      if (map.is_linear(l.var)) linear.push_back(l);
    ++r.assignments_checked;
    if (!lra::check_feasible(map.table(), linear).feasible)
      r.violations.push_back({Violation::Kind::TheoryUnsat, g.root(), "theory-inconsistent assignment", std::move(a)});
  }
  r.theory_checked = true;
  return r;
}

DdnnfGraph condense(const DdnnfGraph& g) {
  if (!g.tagged()) throw NotTagged("condense: graph carries no implied-literal tags");
  GraphBuilder b(g.num_vars(), g.num_atom_vars());
  std::vector<std::optional<NodeId>> map(g.size());
  for (NodeId id : g.reachable()) {
    const Node& n = g.node(id);
    switch (n.kind) {
      case NodeKind::True: map[id] = b.true_node(); break;
      case NodeKind::False: map[id] = b.false_node(); break;
      case NodeKind::Lit:
        if (!n.implied) map[id] = b.literal(n.lit);
        break;
      case NodeKind::And: {
        std::vector<NodeId> kids;
        for (NodeId c : n.children)
          if (map[c]) kids.push_back(*map[c]);
        if (kids.empty())
          map[id] = b.true_node();
        else if (kids.size() == 1)
          map[id] = kids.front();
        else
          map[id] = b.raw_and(std::move(kids));
        break;
      }
      case NodeKind::Or: {
        std::vector<NodeId> kids;
        for (NodeId c : n.children) kids.push_back(map[c] ? *map[c] : b.true_node());
        map[id] = b.raw_or(n.decision_var, std::move(kids));
        break;
      }
    }
  }
  NodeId root = map[g.root()] ? *map[g.root()] : b.true_node();
  return b.finish(root, g.atom_map(), true);
}

}  // namespace smtkc
