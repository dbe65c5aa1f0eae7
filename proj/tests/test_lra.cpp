#include <gtest/gtest.h>

#include <random>

#include "smtkc/lra_solver.hpp"

using namespace smtkc;
using namespace smtkc::lra;

namespace {

struct Vocabulary {
  AtomTable table;
  RealVar x = table.declare_real("x");
  RealVar y = table.declare_real("y");
  RealVar z = table.declare_real("z");

  LinTerm v(RealVar r, int c = 1) const { return LinTerm::variable(r, c); }
  static LinTerm k(int n) { return LinTerm::constant(n); }

  Literal lit(Comparison op, const LinTerm& lhs, const LinTerm& rhs) {
    NormalizedLiteral n = normalize_comparison(op, lhs, rhs);
    return {table.intern(n.atom), n.positive};
  }
  Constraint con(Literal l) const { return constraint_of(table, l); }
  std::vector<Constraint> cons(std::initializer_list<Literal> ls) const {
    std::vector<Constraint> out;
    for (Literal l : ls) out.push_back(con(l));
    return out;
  }
};

// Farkas check written out independently of the library's verifier.
bool derives_contradiction(const std::vector<Constraint>& cs, const std::vector<Rational>& lambda) {
  if (lambda.size() != cs.size()) return false;
  LinTerm sum;
  bool strict = false, any_inequality = false;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const Rational& l = lambda[i];
    if (sgn(l) == 0) continue;
    switch (cs[i].rel) {
      case Relation::Ne: return false;
      case Relation::Eq: break;
      case Relation::Le: any_inequality = true; if (sgn(l) < 0) return false; break;
      case Relation::Lt: any_inequality = true; strict = true; if (sgn(l) < 0) return false; break;
    }
    sum += cs[i].term * l;
  }
  if (!sum.is_constant()) return false;
  const Rational& c = sum.constant_part();
  if (!any_inequality) return sgn(c) != 0;
  return strict ? sgn(c) >= 0 : sgn(c) > 0;
}

bool satisfied_by(const std::vector<Constraint>& cs, const RealPoint& p) {
  for (const Constraint& c : cs) {
    int s = sgn(c.term.evaluate(p));
    bool ok = c.rel == Relation::Le ? s <= 0 : c.rel == Relation::Lt ? s < 0 : c.rel == Relation::Eq ? s == 0 : s != 0;
    if (!ok) return false;
  }
  return true;
}

bool certificate_ok(const std::vector<Constraint>& cs, const Certificate& cert) {
  if (!cert.split) return derives_contradiction(cs, cert.farkas.multipliers);
  std::size_t i = cert.split->index;
  if (i >= cs.size() || cs[i].rel != Relation::Ne) return false;
  std::vector<Constraint> extended = cs;
  extended.push_back({cs[i].term, Relation::Lt});
  if (!derives_contradiction(extended, cert.split->below.multipliers)) return false;
  extended.back() = {-cs[i].term, Relation::Lt};
  return derives_contradiction(extended, cert.split->above.multipliers);
}

}  // namespace

TEST(Assert, BoundsConflict) {
  Vocabulary w;
  Literal le = w.lit(Comparison::Le, w.v(w.x), w.k(0));
  Literal ge = w.lit(Comparison::Ge, w.v(w.x), w.k(1));
  TheoryState s(w.table);
  EXPECT_TRUE(s.assert_literal(le, 1).ok);
  TheoryState::AssertResult r = s.assert_literal(ge, 2);
  ASSERT_FALSE(r.ok);
  std::sort(r.core.begin(), r.core.end());
  std::vector<Literal> expected{le, ge};
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(r.core, expected);
  EXPECT_EQ(s.trail().size(), 1u);
}

TEST(Assert, StrictBandsConflictWithUnitMultipliers) {
  Vocabulary w;
  Literal b1 = w.lit(Comparison::Lt, w.v(w.x), w.v(w.y) - w.k(1));
  Literal b2 = w.lit(Comparison::Gt, w.v(w.x), w.v(w.y) + w.k(1));
  TheoryState s(w.table);
  ASSERT_TRUE(s.assert_literal(b1, 0).ok);
  TheoryState::AssertResult r = s.assert_literal(b2, 0);
  ASSERT_FALSE(r.ok);
  EXPECT_EQ(r.core.size(), 2u);

  std::vector<Constraint> cs = w.cons({b1, b2});
  FeasibilityResult f = check_feasible(cs);
  ASSERT_FALSE(f.feasible);
  const std::vector<Rational>& m = f.certificate.farkas.multipliers;
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0], m[1]);
  EXPECT_GT(sgn(m[0]), 0);
  EXPECT_TRUE(derives_contradiction(cs, m));
}

TEST(Assert, PropositionalLiteralIsRejected) {
  Vocabulary w;
  int a = w.table.intern(Atom::prop("A"));
  TheoryState s(w.table);
  EXPECT_THROW(s.assert_literal({a, true}, 0), NonTheoryLiteral);
  EXPECT_THROW(s.entails({a, true}), NonTheoryLiteral);
}

TEST(Pop, RestoresEarlierLevels) {
  Vocabulary w;
  Literal l1 = w.lit(Comparison::Le, w.v(w.x), w.k(5));
  Literal l2 = w.lit(Comparison::Ge, w.v(w.x), w.k(2));
  Literal l3 = w.lit(Comparison::Le, w.v(w.y), w.v(w.x));
  TheoryState s(w.table);
  ASSERT_TRUE(s.assert_literal(l1, 1).ok);
  s.pop_to_level(0);
  EXPECT_TRUE(s.trail().empty());

  ASSERT_TRUE(s.assert_literal(l1, 1).ok);
  ASSERT_TRUE(s.assert_literal(l2, 2).ok);
  ASSERT_TRUE(s.assert_literal(l3, 3).ok);
  s.pop_to_level(3);
  EXPECT_EQ(s.trail().size(), 3u);
  s.pop_to_level(1);
  ASSERT_EQ(s.trail().size(), 1u);
  EXPECT_EQ(s.trail()[0].lit, l1);
  EXPECT_TRUE(s.assert_literal(l2, 2).ok);
}

TEST(Feasible, EntanglementTriple) {
  Vocabulary w;
  std::vector<Constraint> cs = w.cons({w.lit(Comparison::Lt, w.v(w.x) + w.v(w.y), w.k(5)),
                                       w.lit(Comparison::Gt, w.v(w.x), w.k(5)),
                                       w.lit(Comparison::Ge, w.v(w.y), w.k(0))});
  FeasibilityResult f = check_feasible(cs);
  ASSERT_FALSE(f.feasible);
  const std::vector<Rational>& m = f.certificate.farkas.multipliers;
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0], m[1]);
  EXPECT_EQ(m[1], m[2]);
  EXPECT_TRUE(derives_contradiction(cs, m));
}

TEST(Feasible, EmptySystem) {
  FeasibilityResult f = check_feasible(std::span<const Constraint>{});
  EXPECT_TRUE(f.feasible);
  EXPECT_TRUE(f.witness.empty());
}

TEST(Feasible, UnusedConstraintGetsNoMultiplier) {
  Vocabulary w;
  std::vector<Constraint> cs = w.cons({w.lit(Comparison::Le, w.v(w.x), w.k(0)), w.lit(Comparison::Ge, w.v(w.x), w.k(1)),
                                       w.lit(Comparison::Le, w.v(w.y), w.k(2))});
  FeasibilityResult f = check_feasible(cs);
  ASSERT_FALSE(f.feasible);
  EXPECT_EQ(sgn(f.certificate.farkas.multipliers[2]), 0);
  EXPECT_EQ(f.core(), (std::vector<std::size_t>{0, 1}));
}

TEST(Feasible, EqualitiesAndDisequalities) {
  Vocabulary w;
  Literal eq = w.lit(Comparison::Eq, w.v(w.x) + w.v(w.y), w.k(2));
  Literal xle = w.lit(Comparison::Le, w.v(w.x), w.k(1));
  Literal yle = w.lit(Comparison::Le, w.v(w.y), w.k(1));
  Literal ne = w.lit(Comparison::Ne, w.v(w.x), w.v(w.y));
  // x + y = 2, x <= 1, y <= 1 pins x = y = 1.
  std::vector<Constraint> pinned = w.cons({eq, xle, yle});
  FeasibilityResult p = check_feasible(pinned);
  ASSERT_TRUE(p.feasible);
  EXPECT_TRUE(satisfied_by(pinned, p.witness));

  std::vector<Constraint> cs = w.cons({eq, xle, yle, ne});
  FeasibilityResult f = check_feasible(cs);
  ASSERT_FALSE(f.feasible);
  ASSERT_TRUE(f.certificate.split.has_value());
  EXPECT_EQ(f.certificate.split->index, 3u);
  EXPECT_TRUE(certificate_ok(cs, f.certificate));
  EXPECT_TRUE(verify_certificate(cs, f.certificate));

  // Several disequalities on an open interval remain satisfiable.
  std::vector<Constraint> open = w.cons({w.lit(Comparison::Ge, w.v(w.x), w.k(0)), w.lit(Comparison::Le, w.v(w.x), w.k(1)),
                                         w.lit(Comparison::Ne, w.v(w.x), w.k(0)), w.lit(Comparison::Ne, w.v(w.x), w.k(1)),
                                         w.lit(Comparison::Ne, w.v(w.x, 2), w.k(1))});
  FeasibilityResult o = check_feasible(open);
  ASSERT_TRUE(o.feasible);
  EXPECT_TRUE(satisfied_by(open, o.witness));
}

TEST(Entails, Examples) {
  Vocabulary w;
  Literal sum = w.lit(Comparison::Lt, w.v(w.x) + w.v(w.y), w.k(5));
  Literal xgt = w.lit(Comparison::Gt, w.v(w.x), w.k(5));
  Literal ylt = w.lit(Comparison::Lt, w.v(w.y), w.k(0));
  TheoryState s(w.table);
  ASSERT_TRUE(s.assert_literal(sum, 1).ok);
  ASSERT_TRUE(s.assert_literal(xgt, 2).ok);
  EXPECT_TRUE(s.entails(ylt));
  EXPECT_FALSE(s.entails(~ylt));

  TheoryState t(w.table);
  Literal xle0 = w.lit(Comparison::Le, w.v(w.x), w.k(0));
  Literal xge1 = w.lit(Comparison::Ge, w.v(w.x), w.k(1));
  ASSERT_TRUE(t.assert_literal(xge1, 1).ok);
  EXPECT_TRUE(t.entails(~xle0));

  TheoryState empty(w.table);
  EXPECT_FALSE(empty.entails(xle0));
}

TEST(Minimize, Examples) {
  Vocabulary w;
  Literal a = w.lit(Comparison::Le, w.v(w.x), w.k(0));
  Literal b = w.lit(Comparison::Ge, w.v(w.x), w.k(1));
  Literal c = w.lit(Comparison::Le, w.v(w.y), w.k(2));
  EXPECT_EQ(minimize_core(w.table, {a, b, c}), (std::vector<Literal>{a, b}));
  EXPECT_EQ(minimize_core(w.table, {a, b}), (std::vector<Literal>{a, b}));
  EXPECT_THROW(minimize_core(w.table, {a, c}), NotInfeasible);

  Literal xy = w.lit(Comparison::Lt, w.v(w.x), w.v(w.y));
  Literal yz = w.lit(Comparison::Lt, w.v(w.y), w.v(w.z));
  Literal zx = w.lit(Comparison::Lt, w.v(w.z), w.v(w.x));
  EXPECT_EQ(minimize_core(w.table, {xy, yz, zx}), (std::vector<Literal>{xy, yz, zx}));
}

TEST(Propagate, Examples) {
  Vocabulary w;
  Literal xle0 = w.lit(Comparison::Le, w.v(w.x), w.k(0));
  Literal xge1 = w.lit(Comparison::Ge, w.v(w.x), w.k(1));
  TheoryState s(w.table);
  ASSERT_TRUE(s.assert_literal(xge1, 1).ok);
  std::vector<int> cand{xle0.var};
  EXPECT_EQ(s.propagate_candidates(cand, 10), (std::vector<Literal>{~xle0}));

  TheoryState empty(w.table);
  EXPECT_TRUE(empty.propagate_candidates(cand, 0).empty());

  Literal sum = w.lit(Comparison::Lt, w.v(w.x) + w.v(w.y), w.k(5));
  Literal xgt = w.lit(Comparison::Gt, w.v(w.x), w.k(5));
  Literal ylt = w.lit(Comparison::Lt, w.v(w.y), w.k(0));
  TheoryState t(w.table);
  ASSERT_TRUE(t.assert_literal(sum, 1).ok);
  ASSERT_TRUE(t.assert_literal(xgt, 2).ok);
  std::vector<int> ycand{ylt.var};
  EXPECT_EQ(t.propagate_candidates(ycand, 2), (std::vector<Literal>{ylt}));
}

namespace {

std::vector<Literal> random_literals(Vocabulary& w, std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> coef(-3, 3), cst(-4, 4), op(0, 5), vars(1, 3);
  std::vector<Literal> out;
  while (static_cast<int>(out.size()) < n) {
    LinTerm t;
    int k = vars(rng);
    for (RealVar r = 0; r < k; ++r) t += w.v(r, coef(rng));
    if (t.is_constant()) continue;
    NormalizedLiteral l = normalize_comparison(static_cast<Comparison>(op(rng)), t, w.k(cst(rng)));
    out.push_back({w.table.intern(l.atom), l.positive});
  }
  return out;
}

}  // namespace

TEST(Properties, CertificatesAndWitnessesCheckOut) {
  Vocabulary w;
  std::mt19937_64 rng(5);
  int unsat = 0;
  for (int i = 0; i < 2000; ++i) {
    std::vector<Literal> ls = random_literals(w, rng, 1 + static_cast<int>(rng() % 6));
    std::vector<Constraint> cs;
    for (Literal l : ls) cs.push_back(w.con(l));
    FeasibilityResult f = check_feasible(cs);
    if (f.feasible) {
      ASSERT_TRUE(satisfied_by(cs, f.witness));
    } else {
      ++unsat;
      ASSERT_TRUE(certificate_ok(cs, f.certificate));
    }
  }
  EXPECT_GT(unsat, 100);
}

TEST(Properties, InfeasibilityIsMonotone) {
  Vocabulary w;
  std::mt19937_64 rng(6);
  for (int i = 0; i < 500; ++i) {
    std::vector<Literal> ls = random_literals(w, rng, 6);
    std::vector<Literal> prefix;
    bool infeasible = false;
    for (Literal l : ls) {
      prefix.push_back(l);
      bool now = !check_feasible(w.table, prefix).feasible;
      ASSERT_TRUE(!infeasible || now);
      infeasible = now;
    }
  }
}

TEST(Properties, EntailmentMeansNegationConflicts) {
  Vocabulary w;
  std::mt19937_64 rng(8);
  for (int i = 0; i < 300; ++i) {
    std::vector<Literal> ls = random_literals(w, rng, 4);
    TheoryState s(w.table);
    int level = 0;
    for (std::size_t j = 0; j + 1 < ls.size(); ++j) s.assert_literal(ls[j], ++level);
    Literal probe = ls.back();
    if (s.entails(probe)) EXPECT_FALSE(s.assert_literal(~probe, level + 1).ok);
  }
}

TEST(Properties, PushPopMatchesRebuild) {
  Vocabulary w;
  std::mt19937_64 rng(9);
  for (int round = 0; round < 200; ++round) {
    std::vector<Literal> pool = random_literals(w, rng, 8);
    TheoryState s(w.table);
    int level = 0;
    for (int step = 0; step < 12; ++step) {
      if (rng() % 3 == 0 && level > 0) {
        level = static_cast<int>(rng() % static_cast<unsigned>(level + 1));
        s.pop_to_level(level);
      } else {
        Literal l = pool[rng() % pool.size()];
        std::vector<Literal> rebuilt = s.literals();
        rebuilt.push_back(l);
        bool expect_ok = check_feasible(w.table, rebuilt).feasible;
        TheoryState::AssertResult r = s.assert_literal(l, ++level);
        ASSERT_EQ(r.ok, expect_ok);
        if (!r.ok) {
          ASSERT_FALSE(check_feasible(w.table, r.core).feasible);
          ASSERT_NE(std::find(r.core.begin(), r.core.end(), l), r.core.end());
          --level;
        }
      }
      ASSERT_TRUE(check_feasible(w.table, s.literals()).feasible);
    }
  }
}
