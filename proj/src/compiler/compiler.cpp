#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>

#include <json.hpp>

#include "propagator.hpp"
#include "smtkc/compiler.hpp"
#include "smtkc/lra_solver.hpp"

namespace smtkc {

const char* to_string(CompileMode m) {
  switch (m) {
    case CompileMode::Lazy: return "lazy";
    case CompileMode::Eager: return "eager";
    case CompileMode::Agnostic: return "agnostic";
  }
  return "?";
}

const char* to_string(Heuristic h) { return h == Heuristic::Dlcs ? "dlcs" : "fixed"; }

namespace {

template <typename F>
void for_each_stat(const CompileStats& s, F&& f) {
  f("decisions", s.decisions);
  f("bool_props", s.bool_props);
  f("theory_props", s.theory_props);
  f("theory_checks", s.theory_checks);
  f("conflicts", s.conflicts);
  f("learned", s.learned);
  f("components", s.components);
  f("cache_hits", s.cache_hits);
  f("cache_misses", s.cache_misses);
  f("nodes", s.nodes);
  f("edges", s.edges);
}

}  // namespace

std::string CompileStats::to_text() const {
  std::string out;
  for_each_stat(*this, [&](const char* k, std::uint64_t v) { out += std::string(k) + ' ' + std::to_string(v) + '\n'; });
  char ms[32];
  std::snprintf(ms, sizeof ms, "%.3f", wall_ms);
  out += std::string("wall_ms ") + ms + '\n';
  return out;
}

std::string CompileStats::to_json() const {
  nlohmann::ordered_json j;
  for_each_stat(*this, [&](const char* k, std::uint64_t v) { j[k] = v; });
  j["wall_ms"] = wall_ms;
  return j.dump();
}

namespace {

class Search {
 public:
  Search(const ClauseDb& db, const AtomMap& map, const CompileConfig& cfg, CompileStats& stats)
      : db_(db),
        map_(map),
        cfg_(cfg),
        stats_(stats),
        prop_(db),
        builder_(db.num_vars, db.num_atom_vars),
        cache_enabled_(cfg.cache) {
    if (cfg.mode == CompileMode::Lazy) theory_.emplace(map.table());
  }

  NodeId run() {
    if (prop_.has_empty_clause()) return builder_.false_node();
    for (std::size_t ci : prop_.initial_units()) {
      Literal l = db_.clauses[ci].front();
      if (prop_.value(l) == -1) return builder_.false_node();
      if (prop_.value(l) == 0) prop_.assign(l);
    }
    std::vector<NodeId> conjuncts;
    std::optional<std::vector<Literal>> theory_implied = settle(0, nullptr);
    if (!theory_implied) return builder_.false_node();
    for (std::size_t i = 0; i < prop_.trail().size(); ++i) {
      Literal l = prop_.trail()[i];
      conjuncts.push_back(builder_.literal(l, is_theory_implied(*theory_implied, l)));
    }
    stats_.bool_props += prop_.trail().size() - theory_implied->size();
    std::vector<Component> comps = split(nullptr);
    for (Component& c : comps) {
      NodeId n = compile_component(c);
      if (builder_.node(n).kind == NodeKind::False) return builder_.false_node();
      conjuncts.push_back(n);
    }
    return builder_.conjoin(std::move(conjuncts));
  }

  GraphBuilder& builder() { return builder_; }
  std::uint64_t trail_checks() const { return theory_ ? theory_->checks() : 0; }

 private:
  static bool is_theory_implied(const std::vector<Literal>& implied, Literal l) {
    return std::find(implied.begin(), implied.end(), l) != implied.end();
  }

  std::vector<Component> split(const Component* within) {
    std::vector<Literal> trail;
    if (theory_) trail = theory_->literals();
    std::vector<Component> comps = split_components(db_, map_, prop_.assignment(), trail, cfg_, within);
    stats_.components += comps.size();
    return comps;
  }

  // Boolean and theory propagation to a joint fixpoint over the trail suffix
  // starting at `from`. Returns the theory-implied literals, or nothing on conflict.
  std::optional<std::vector<Literal>> settle(std::size_t from, const Component* comp) {
    std::vector<Literal> implied;
    std::size_t asserted = from;
    for (;;) {
      if (prop_.propagate()) {
        ++stats_.conflicts;
        return std::nullopt;
      }
      if (!theory_) return implied;
      for (; asserted < prop_.trail().size(); ++asserted) {
        Literal l = prop_.trail()[asserted];
        if (!map_.is_linear(l.var)) continue;
        lra::TheoryState::AssertResult r = theory_->assert_literal(l, depth_);
        if (!r.ok) {
          ++stats_.conflicts;
          if (cfg_.learning) learn(std::move(r.core));
          return std::nullopt;
        }
      }
      std::vector<int> candidates;
      auto consider = [&](int v) {
        if (map_.is_linear(v) && prop_.assignment()[static_cast<std::size_t>(v)] == 0) candidates.push_back(v);
      };
      if (comp) {
        for (int v : comp->vars) consider(v);
      } else {
        for (int v = 1; v <= db_.num_atom_vars; ++v) consider(v);
      }
      if (candidates.empty()) return implied;
      std::size_t budget = cfg_.propagation_budget < 0 ? 2 * candidates.size()
                                                       : static_cast<std::size_t>(cfg_.propagation_budget);
      std::vector<Literal> found = theory_->propagate_candidates(candidates, budget);
      if (found.empty()) return implied;
      for (Literal l : found) {
        prop_.assign(l);
        implied.push_back(l);
        ++stats_.theory_props;
      }
    }
  }

  void learn(std::vector<Literal> core) {
    stats_.theory_checks += core.size() + 1;
    core = lra::minimize_core(map_.table(), std::move(core));
    prop_.add_learned(learn_theory_clause(core));
    ++stats_.learned;
  }

  NodeId compile_component(const Component& comp) {
    std::string key;
    if (cache_enabled_) {
      key = make_cache_key(db_, prop_.assignment(), comp);
      if (std::optional<NodeId> hit = cache_.lookup(key)) {
        ++stats_.cache_hits;
        if (cfg_.verify_cache_hits) verify_hit(comp, *hit);
        return *hit;
      }
      ++stats_.cache_misses;
    }
    Literal d = decide(db_, prop_.assignment(), comp, cfg_.heuristic);
    ++stats_.decisions;
    NodeId pos = branch(d, comp);
    NodeId neg = branch(~d, comp);
    NodeId n = builder_.decision(d.var, pos, neg);
    if (cache_enabled_) cache_.store(key, n);
    return n;
  }

  NodeId branch(Literal decision, const Component& comp) {
    std::size_t mark = prop_.trail().size();
    ++depth_;
    prop_.assign(decision);
    NodeId result = builder_.false_node();
    if (std::optional<std::vector<Literal>> theory_implied = settle(mark, &comp)) {
      std::vector<NodeId> conjuncts;
      conjuncts.push_back(builder_.literal(decision));
      for (std::size_t i = mark + 1; i < prop_.trail().size(); ++i) {
        Literal l = prop_.trail()[i];
        conjuncts.push_back(builder_.literal(l, is_theory_implied(*theory_implied, l)));
      }
      stats_.bool_props += prop_.trail().size() - mark - 1 - theory_implied->size();
      bool dead = false;
      for (const Component& sub : split(&comp)) {
        NodeId n = compile_component(sub);
        if (builder_.node(n).kind == NodeKind::False) {
          dead = true;
          break;
        }
        conjuncts.push_back(n);
      }
      if (!dead) result = builder_.conjoin(std::move(conjuncts));
    }
    prop_.undo(mark);
    --depth_;
    if (theory_) theory_->pop_to_level(depth_);
    return result;
  }

  void verify_hit(const Component& comp, NodeId hit) {
    bool saved = cache_enabled_;
    cache_enabled_ = false;
    NodeId fresh = compile_component(comp);
    cache_enabled_ = saved;
    if (subgraph_count(hit) != subgraph_count(fresh))
      throw std::logic_error("cache hit disagrees with recompilation");
  }

  BigInt subgraph_count(NodeId root) {
    std::vector<std::optional<BigInt>> memo(root + 1);
    std::function<BigInt(NodeId)> go = [&](NodeId id) -> BigInt {
      if (memo[id]) return *memo[id];
      const Node& n = builder_.node(id);
      BigInt v = n.kind == NodeKind::False ? 0 : 1;
      if (n.kind == NodeKind::And)
        for (NodeId c : n.children) v *= go(c);
      if (n.kind == NodeKind::Or) {
        v = 0;
        for (NodeId c : n.children) v += go(c);
      }
      memo[id] = v;
      return v;
    };
    return go(root);
  }

  const ClauseDb& db_;
  const AtomMap& map_;
  const CompileConfig& cfg_;
  CompileStats& stats_;
  detail::Propagator prop_;
  GraphBuilder builder_;
  std::optional<lra::TheoryState> theory_;
  ComponentCache cache_;
  bool cache_enabled_;
  int depth_ = 0;
};

}  // namespace

DdnnfGraph compile(const ClauseDb& db, const AtomMap& map, const CompileConfig& cfg, CompileStats* stats) {
  auto start = std::chrono::steady_clock::now();
  CompileStats local;
  CompileStats& s = stats ? *stats : local;
  s = CompileStats{};
  Search search(db, map, cfg, s);
  NodeId root = search.run();
  DdnnfGraph g = search.builder().finish(root, std::make_shared<const AtomMap>(map), true);
  s.theory_checks += search.trail_checks();
  s.nodes = g.reachable().size();
  s.edges = g.reachable_edges();
  s.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return g;
}

}  // namespace smtkc
