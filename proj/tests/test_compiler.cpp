#include <gtest/gtest.h>

#include <json.hpp>

#include "instances.hpp"
#include "smtkc/compiler.hpp"
#include "smtkc/oracle.hpp"

using namespace smtkc;

namespace {

PartialAssignment unassigned(const ClauseDb& db) { return PartialAssignment(static_cast<std::size_t>(db.num_vars) + 1, 0); }

ClauseDb propositional(int n, std::vector<Clause> clauses) {
  ClauseDb db;
  db.num_vars = db.num_atom_vars = n;
  db.aux_mark.assign(static_cast<std::size_t>(n) + 1, false);
  for (Clause& c : clauses) db.add_clause(std::move(c));
  return db;
}

AtomMap prop_map(int n) {
  AtomTable t;
  for (int i = 1; i <= n; ++i) t.intern(Atom::prop("p" + std::to_string(i)));
  return AtomMap(std::move(t));
}

BigInt lazy_count(const std::string& text, CompileConfig cfg = {}) { return count(compile_formula(parse_smt2(text), cfg)); }

std::vector<CompileConfig> all_lazy_configs() {
  std::vector<CompileConfig> out;
  for (int bits = 0; bits < 16; ++bits) {
    CompileConfig c;
    c.components = bits & 1;
    c.cache = bits & 2;
    c.learning = bits & 4;
    c.heuristic = bits & 8 ? Heuristic::FixedOrder : Heuristic::Dlcs;
    out.push_back(c);
  }
  return out;
}

}  // namespace

TEST(UnitPropagate, ChainsImplications) {
  ClauseDb db = propositional(3, {{{1, false}, {2, true}}, {{2, false}, {3, true}}});
  PartialAssignment a = unassigned(db);
  a[1] = 1;
  UnitResult r = unit_propagate(db, a);
  EXPECT_FALSE(r.conflict);
  EXPECT_EQ(r.implied, (std::vector<Literal>{{2, true}, {3, true}}));
}

TEST(UnitPropagate, ReportsConflicts) {
  ClauseDb db = propositional(1, {{{1, true}}, {{1, false}}});
  UnitResult r = unit_propagate(db, unassigned(db));
  ASSERT_TRUE(r.conflict);
  EXPECT_TRUE(db.clauses[*r.conflict].size() == 1);

  ClauseDb two = propositional(2, {{{1, true}, {2, true}}});
  PartialAssignment a = unassigned(two);
  a[1] = a[2] = -1;
  EXPECT_EQ(unit_propagate(two, a).conflict, std::optional<std::size_t>(0));
}

TEST(UnitPropagate, SatisfiedClausesImplyNothing) {
  ClauseDb db = propositional(3, {{{1, true}, {2, true}, {3, true}}});
  PartialAssignment a = unassigned(db);
  a[1] = 1;
  UnitResult r = unit_propagate(db, a);
  EXPECT_TRUE(r.implied.empty());
  EXPECT_FALSE(r.conflict);
}

TEST(Components, PropositionalClausesSplit) {
  ClauseDb db = propositional(4, {{{1, true}, {2, true}}, {{3, true}, {4, true}}});
  std::vector<Component> cs = split_components(db, prop_map(4), unassigned(db), {}, CompileConfig{});
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0].vars, (std::vector<int>{1, 2}));
  EXPECT_EQ(cs[1].vars, (std::vector<int>{3, 4}));

  CompileConfig off;
  off.components = false;
  EXPECT_EQ(split_components(db, prop_map(4), unassigned(db), {}, off).size(), 1u);
}

TEST(Components, EntangledFormulaSplitsOnRealVariables) {
  Formula f = parse_smt2(smtkc::testing::kEntangled);
  ClauseDb db = to_cnf(boolean_abstract(f).formula);
  AtomMap map(f.atoms);
  std::vector<Component> cs = split_components(db, map, unassigned(db), {}, CompileConfig{});
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0].real_vars.size(), 1u);
  EXPECT_EQ(cs[1].real_vars.size(), 1u);
  EXPECT_NE(cs[0].real_vars, cs[1].real_vars);
}

TEST(Components, TrailLiteralJoinsEntangledFormula) {
  Formula f = parse_smt2(smtkc::testing::kEntangled);
  ClauseDb db = to_cnf(boolean_abstract(f).formula);
  RealVar x = *f.atoms.find_real("x"), y = *f.atoms.find_real("y");
  NormalizedLiteral sum =
      normalize_comparison(Comparison::Lt, LinTerm::variable(x) + LinTerm::variable(y), LinTerm::constant(5));
  int extra = f.atoms.intern(sum.atom);
  ASSERT_EQ(extra, 5);
  AtomMap map(f.atoms);
  db.num_vars = db.num_atom_vars = 5;
  db.aux_mark.assign(6, false);

  PartialAssignment a = unassigned(db);
  Literal lit{extra, sum.positive};
  a[5] = lit.positive ? 1 : -1;
  std::vector<Literal> trail{lit};

  std::vector<Component> joined = split_components(db, map, a, trail, CompileConfig{});
  ASSERT_EQ(joined.size(), 1u);
  EXPECT_EQ(joined[0].vars, (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(joined[0].real_vars, (std::vector<RealVar>{x, y}));
  EXPECT_EQ(joined[0].trail, trail);

  CompileConfig agnostic;
  agnostic.mode = CompileMode::Agnostic;
  EXPECT_EQ(split_components(db, map, a, trail, agnostic).size(), 2u);

  // Unassigned, the extra atom is itself a component member linking x and y.
  std::vector<Component> free = split_components(db, map, unassigned(db), {}, CompileConfig{});
  ASSERT_EQ(free.size(), 1u);
  EXPECT_EQ(free[0].vars, (std::vector<int>{1, 2, 3, 4, 5}));
}

TEST(Components, WithinRestrictsToAComponent) {
  ClauseDb db = propositional(4, {{{1, true}, {2, true}}, {{3, true}, {4, true}}});
  std::vector<Component> cs = split_components(db, prop_map(4), unassigned(db), {}, CompileConfig{});
  PartialAssignment a = unassigned(db);
  a[3] = -1;
  std::vector<Component> sub = split_components(db, prop_map(4), a, {}, CompileConfig{}, &cs[1]);
  ASSERT_EQ(sub.size(), 1u);
  EXPECT_EQ(sub[0].vars, (std::vector<int>{4}));
}

TEST(Decide, DlcsPicksMostFrequentVariable) {
  ClauseDb db = propositional(4, {{{1, true}, {2, true}}, {{1, false}, {3, true}}, {{1, true}, {4, true}},
                                  {{3, true}, {4, false}}});
  std::vector<Component> cs = split_components(db, prop_map(4), unassigned(db), {}, CompileConfig{});
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(decide(db, unassigned(db), cs[0], Heuristic::Dlcs), (Literal{1, true}));

  // Ties go to the lowest variable.
  ClauseDb tie = propositional(3, {{{2, true}, {3, true}}, {{2, false}, {3, false}}});
  std::vector<Component> t = split_components(tie, prop_map(3), unassigned(tie), {}, CompileConfig{});
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].vars, (std::vector<int>{1}));
  EXPECT_EQ(decide(tie, unassigned(tie), t[1], Heuristic::Dlcs), (Literal{2, true}));
}

TEST(Decide, FixedOrderAndExhaustion) {
  ClauseDb db = propositional(3, {{{3, true}, {2, true}}});
  Component c;
  c.clauses = {0};
  c.vars = {2, 3};
  EXPECT_EQ(decide(db, unassigned(db), c, Heuristic::FixedOrder), (Literal{2, true}));
  EXPECT_THROW(decide(db, unassigned(db), Component{}, Heuristic::Dlcs), NoUnassigned);
}

TEST(Learn, NegatesTheCore) {
  std::vector<Literal> core{{2, false}, {1, false}};
  EXPECT_EQ(learn_theory_clause(core), (Clause{{1, true}, {2, true}}));
  std::vector<Literal> one{{3, true}};
  EXPECT_EQ(learn_theory_clause(one), (Clause{{3, false}}));
}

TEST(CacheKey, IgnoresAssignmentsOutsideTheComponent) {
  ClauseDb db = propositional(4, {{{1, true}, {2, true}}, {{3, true}, {4, true}}});
  std::vector<Component> cs = split_components(db, prop_map(4), unassigned(db), {}, CompileConfig{});
  PartialAssignment a = unassigned(db);
  a[3] = 1;
  EXPECT_EQ(make_cache_key(db, unassigned(db), cs[0]), make_cache_key(db, a, cs[0]));
  EXPECT_NE(make_cache_key(db, unassigned(db), cs[0]), make_cache_key(db, unassigned(db), cs[1]));
}

TEST(CacheKey, DistinguishesProjectedTrails) {
  Formula f = parse_smt2(smtkc::testing::kEntangled);
  ClauseDb db = to_cnf(boolean_abstract(f).formula);
  AtomMap map(f.atoms);
  std::vector<Component> cs = split_components(db, map, unassigned(db), {}, CompileConfig{});
  ASSERT_EQ(cs.size(), 2u);
  Component a = cs[0], b = cs[0];
  b.trail = {{cs[1].vars[0], true}};
  EXPECT_NE(make_cache_key(db, unassigned(db), a), make_cache_key(db, unassigned(db), b));
  Component c = b;
  c.trail = {~b.trail[0]};
  EXPECT_NE(make_cache_key(db, unassigned(db), b), make_cache_key(db, unassigned(db), c));
}

TEST(CacheKey, ResidualClausesMatter) {
  ClauseDb db = propositional(3, {{{1, true}, {2, true}}, {{1, true}, {2, true}, {3, true}}});
  std::vector<Component> cs = split_components(db, prop_map(3), unassigned(db), {}, CompileConfig{});
  ASSERT_EQ(cs.size(), 1u);
  PartialAssignment a = unassigned(db);
  a[3] = 1;
  std::vector<Component> after = split_components(db, prop_map(3), a, {}, CompileConfig{});
  ASSERT_EQ(after.size(), 1u);
  EXPECT_NE(make_cache_key(db, unassigned(db), cs[0]), make_cache_key(db, a, after[0]));

  ComponentCache cache;
  EXPECT_FALSE(cache.lookup("k"));
  cache.store("k", 7);
  EXPECT_EQ(cache.lookup("k"), std::optional<NodeId>(7));
  EXPECT_EQ(cache.size(), 1u);
}

TEST(Compile, Bands) {
  CompileStats stats;
  DdnnfGraph g = compile_formula(parse_smt2(smtkc::testing::kBands), CompileConfig{}, &stats);
  EXPECT_EQ(count(g), 3);
  EXPECT_TRUE(validate(g, ValidationLevel::Theory).ok());
  EXPECT_GT(stats.theory_props, 0u);
  EXPECT_EQ(stats.nodes, g.reachable().size());
  EXPECT_EQ(stats.edges, g.reachable_edges());

  bool tagged_literal = false;
  for (NodeId id : g.reachable()) tagged_literal = tagged_literal || g.node(id).implied;
  EXPECT_TRUE(tagged_literal);

  CompileConfig agnostic;
  agnostic.mode = CompileMode::Agnostic;
  EXPECT_EQ(lazy_count(smtkc::testing::kBands, agnostic), 4);
}

TEST(Compile, RunningExample) {
  EXPECT_EQ(lazy_count(smtkc::testing::kRunning), 3);
  CompileConfig agnostic;
  agnostic.mode = CompileMode::Agnostic;
  EXPECT_EQ(lazy_count(smtkc::testing::kRunning, agnostic), 5);
}

TEST(Compile, UnsatisfiableIsFalse) {
  const char* text = "(declare-const x Real)(assert (and (< x 0) (> x 1)))";
  DdnnfGraph g = compile_formula(parse_smt2(text), CompileConfig{});
  EXPECT_EQ(g.node(g.root()).kind, NodeKind::False);
  EXPECT_EQ(count(g), 0);
  CompileConfig agnostic;
  agnostic.mode = CompileMode::Agnostic;
  EXPECT_EQ(lazy_count(text, agnostic), 1);

  DdnnfGraph f = compile_formula(parse_smt2("(assert false)"), CompileConfig{});
  EXPECT_EQ(f.node(f.root()).kind, NodeKind::False);
}

TEST(Compile, TrueHasOneModel) {
  DdnnfGraph g = compile_formula(parse_smt2("(assert true)"), CompileConfig{});
  EXPECT_EQ(g.node(g.root()).kind, NodeKind::True);
  EXPECT_EQ(count(g), 1);
}

TEST(Compile, FreeAtomsAreBranched) {
  // b occurs only inside a tautology, so it is free once parsed.
  const char* text = "(declare-const a Bool)(declare-const b Bool)(assert (and a (or b (not b))))";
  DdnnfGraph g = compile_formula(parse_smt2(text), CompileConfig{});
  EXPECT_TRUE(validate(g, ValidationLevel::Structural).ok());
  EXPECT_EQ(count(g), brute_counts(parse_smt2(text)).aware);
}

TEST(Compile, LearningWithoutPropagation) {
  CompileConfig on;
  on.propagation_budget = 0;
  CompileStats with;
  EXPECT_EQ(count(compile_formula(parse_smt2(smtkc::testing::kBands), on, &with)), 3);
  EXPECT_GT(with.conflicts, 0u);
  EXPECT_GT(with.learned, 0u);

  CompileConfig off = on;
  off.learning = false;
  CompileStats without;
  EXPECT_EQ(count(compile_formula(parse_smt2(smtkc::testing::kBands), off, &without)), 3);
  EXPECT_EQ(without.learned, 0u);
}

TEST(Compile, ConfigurationsAgreeWithTheOracle) {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    Formula f = parse_smt2(smtkc::testing::random_instance(seed));
    std::uint64_t aware = brute_counts(f).aware;
    for (CompileConfig cfg : all_lazy_configs()) {
      for (long long budget : {-1LL, 0LL, 1LL}) {
        cfg.propagation_budget = budget;
        DdnnfGraph g = compile_formula(f, cfg);
        ASSERT_EQ(count(g), aware) << "seed " << seed;
        ASSERT_TRUE(validate(g, ValidationLevel::Structural).ok()) << "seed " << seed;
      }
    }
  }
}

TEST(Compile, CacheHitsAreSound) {
  std::uint64_t hits = 0;
  CompileConfig cfg;
  cfg.verify_cache_hits = true;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    std::string text = smtkc::testing::random_instance(seed, {6, 3, 8, 3, 0.25});
    for (const std::string& t : {text, smtkc::testing::disjoint_copy(text, "_b")}) {
      CompileStats stats;
      EXPECT_NO_THROW(compile_formula(parse_smt2(t), cfg, &stats)) << "seed " << seed;
      hits += stats.cache_hits;
    }
  }
  EXPECT_GT(hits, 0u);
}

TEST(Stats, FixedKeyOrder) {
  CompileStats s;
  s.decisions = 4;
  s.wall_ms = 1.5;
  std::string text = s.to_text();
  EXPECT_EQ(text.substr(0, text.find('\n')), "decisions 4");
  EXPECT_NE(text.find("wall_ms 1.500"), std::string::npos);

  nlohmann::ordered_json j = nlohmann::ordered_json::parse(s.to_json());
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  std::vector<std::string> expected{"decisions", "bool_props", "theory_props", "theory_checks",
                                    "conflicts", "learned",    "components",   "cache_hits",
                                    "cache_misses", "nodes",   "edges",        "wall_ms"};
  EXPECT_EQ(keys, expected);
  EXPECT_EQ(j["decisions"], 4);
}

TEST(Compile, TheoryOnlyReasonsInLazyMode) {
  CompileStats lazy, agnostic;
  compile_formula(parse_smt2(smtkc::testing::kBands), CompileConfig{}, &lazy);
  CompileConfig cfg;
  cfg.mode = CompileMode::Agnostic;
  compile_formula(parse_smt2(smtkc::testing::kBands), cfg, &agnostic);
  EXPECT_GT(lazy.theory_checks, 0u);
  EXPECT_EQ(agnostic.theory_checks, 0u);
  EXPECT_EQ(agnostic.theory_props, 0u);
}
