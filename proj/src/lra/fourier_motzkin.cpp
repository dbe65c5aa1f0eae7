#include <algorithm>
#include <map>
#include <set>

#include "smtkc/lra_solver.hpp"

namespace smtkc::lra {
namespace {

thread_local ScopedFeasibilityObserver::Callback g_observer;

// a . x + c  REL  0 over locally indexed variables, with the multipliers that
// derive it from the input system.
struct Row {
  std::vector<Rational> a;
  Rational c;
  Relation rel = Relation::Le;
  std::vector<Rational> lambda;

  bool is_constant() const {
    return std::all_of(a.begin(), a.end(), [](const Rational& q) { return sgn(q) == 0; });
  }
  bool contradictory() const {
    switch (rel) {
      case Relation::Le: return sgn(c) > 0;
      case Relation::Lt: return sgn(c) >= 0;
      case Relation::Eq: return sgn(c) != 0;
      case Relation::Ne: return sgn(c) == 0;
    }
    return false;
  }
};

void axpy(Row& dst, const Rational& k, const Row& src) {
  for (std::size_t j = 0; j < dst.a.size(); ++j)
    if (sgn(src.a[j]) != 0) dst.a[j] += k * src.a[j];
  dst.c += k * src.c;
  for (std::size_t i = 0; i < dst.lambda.size(); ++i)
    if (sgn(src.lambda[i]) != 0) dst.lambda[i] += k * src.lambda[i];
}

void scale(Row& r, const Rational& k) {
  for (Rational& q : r.a) q *= k;
  r.c *= k;
  for (Rational& q : r.lambda) q *= k;
}

// Positive scaling so the leading coefficient has magnitude one.
void normalize(Row& r) {
  for (const Rational& q : r.a) {
    if (sgn(q) == 0) continue;
    Rational k = 1 / abs(q);
    if (k != 1) scale(r, k);
    return;
  }
}

FarkasCertificate certificate_from(Row row) {
  if (row.rel == Relation::Eq && sgn(row.c) < 0) scale(row, Rational(-1));
  return {std::move(row.lambda)};
}

struct Stage {
  std::size_t var = 0;
  bool by_equality = false;
  std::vector<Row> rows;  // pivot row, or every row bounding `var`
};

struct Relaxed {
  bool feasible = false;
  RealPoint witness;
  FarkasCertificate farkas;
};

// Drops satisfied constant rows and keeps the tightest inequality per
// coefficient vector. Returns a contradictory row if one appears.
std::optional<Row> tidy(std::vector<Row>& rows) {
  std::vector<Row> kept;
  std::map<std::vector<Rational>, std::size_t> bound_of;
  for (Row& r : rows) {
    if (r.is_constant()) {
      if (r.contradictory()) return std::move(r);
      continue;
    }
    if (r.rel == Relation::Eq) {
      kept.push_back(std::move(r));
      continue;
    }
    normalize(r);
    auto [it, inserted] = bound_of.try_emplace(r.a, kept.size());
    if (inserted) {
      kept.push_back(std::move(r));
      continue;
    }
    Row& old = kept[it->second];
    bool tighter = r.c > old.c || (r.c == old.c && r.rel == Relation::Lt && old.rel == Relation::Le);
    if (tighter) old = std::move(r);
  }
  rows = std::move(kept);
  return std::nullopt;
}

Rational pick_value(const std::optional<Rational>& lo, bool lo_strict, const std::optional<Rational>& hi,
                    bool hi_strict) {
  if (lo && hi) return *lo == *hi ? *lo : Rational((*lo + *hi) / 2);
  if (lo) return lo_strict ? Rational(*lo + 1) : *lo;
  if (hi) return hi_strict ? Rational(*hi - 1) : *hi;
  return Rational(0);
}

// Decides the system ignoring Ne constraints.
Relaxed solve_relaxed(std::span<const Constraint> constraints) {
  const std::size_t m = constraints.size();
  std::vector<RealVar> vars;
  {
    std::set<RealVar> seen;
    for (const Constraint& k : constraints)
      if (k.rel != Relation::Ne)
        for (const auto& [v, c] : k.term.coeffs()) seen.insert(v);
    vars.assign(seen.begin(), seen.end());
  }
  std::map<RealVar, std::size_t> local;
  for (std::size_t j = 0; j < vars.size(); ++j) local[vars[j]] = j;

  std::vector<Row> rows;
  for (std::size_t i = 0; i < m; ++i) {
    const Constraint& k = constraints[i];
    if (k.rel == Relation::Ne) continue;
    Row r;
    r.a.assign(vars.size(), Rational(0));
    for (const auto& [v, c] : k.term.coeffs()) r.a[local[v]] = c;
    r.c = k.term.constant_part();
    r.rel = k.rel;
    r.lambda.assign(m, Rational(0));
    r.lambda[i] = 1;
    rows.push_back(std::move(r));
  }

  Relaxed out;
  if (auto bad = tidy(rows)) {
    out.farkas = certificate_from(std::move(*bad));
    return out;
  }

  // Ascending variable id.
  std::vector<Stage> stages;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    Stage stage;
    stage.var = k;
    auto pivot = std::find_if(rows.begin(), rows.end(),
                              [&](const Row& r) { return r.rel == Relation::Eq && sgn(r.a[k]) != 0; });
    std::vector<Row> next;
    if (pivot != rows.end()) {
      stage.by_equality = true;
      Row e = std::move(*pivot);
      rows.erase(pivot);
      for (Row& r : rows) {
        if (sgn(r.a[k]) != 0) axpy(r, -r.a[k] / e.a[k], e);
        next.push_back(std::move(r));
      }
      stage.rows.push_back(std::move(e));
    } else {
      std::vector<Row> pos, neg;
      for (Row& r : rows) {
        int s = sgn(r.a[k]);
        if (s > 0)
          pos.push_back(std::move(r));
        else if (s < 0)
          neg.push_back(std::move(r));
        else
          next.push_back(std::move(r));
      }
      for (const Row& p : pos) {
        for (const Row& n : neg) {
          Row r = p;
          scale(r, -n.a[k]);
          axpy(r, p.a[k], n);
          r.a[k] = 0;
          r.rel = (p.rel == Relation::Lt || n.rel == Relation::Lt) ? Relation::Lt : Relation::Le;
          next.push_back(std::move(r));
        }
      }
      stage.rows = std::move(pos);
      for (Row& n : neg) stage.rows.push_back(std::move(n));
    }
    rows = std::move(next);
    stages.push_back(std::move(stage));
    if (auto bad = tidy(rows)) {
      out.farkas = certificate_from(std::move(*bad));
      return out;
    }
  }

  // Back-substitution, last eliminated variable first.
  std::vector<Rational> value(vars.size(), Rational(0));
  for (auto st = stages.rbegin(); st != stages.rend(); ++st) {
    const std::size_t k = st->var;
    auto rest = [&](const Row& r) {
      Rational s = r.c;
      for (std::size_t j = k + 1; j < vars.size(); ++j)
        if (sgn(r.a[j]) != 0) s += r.a[j] * value[j];
      return s;
    };
    if (st->by_equality) {
      const Row& e = st->rows.front();
      value[k] = -rest(e) / e.a[k];
      continue;
    }
    std::optional<Rational> lo, hi;
    bool lo_strict = false, hi_strict = false;
    for (const Row& r : st->rows) {
      Rational bound = -rest(r) / r.a[k];
      bool strict = r.rel == Relation::Lt;
      if (sgn(r.a[k]) > 0) {
        if (!hi || bound < *hi || (bound == *hi && strict)) {
          hi = bound;
          hi_strict = strict;
        }
      } else if (!lo || bound > *lo || (bound == *lo && strict)) {
        lo = bound;
        lo_strict = strict;
      }
    }
    value[k] = pick_value(lo, lo_strict, hi, hi_strict);
  }
  out.feasible = true;
  for (std::size_t j = 0; j < vars.size(); ++j) out.witness[vars[j]] = value[j];
  return out;
}

RealPoint blend(const RealPoint& p, const RealPoint& q, const Rational& mu) {
  RealPoint out;
  for (const auto& [v, x] : p) out[v] += (1 - mu) * x;
  for (const auto& [v, x] : q) out[v] += mu * x;
  return out;
}

FeasibilityResult solve(std::span<const Constraint> constraints) {
  FeasibilityResult result;
  Relaxed relaxed = solve_relaxed(constraints);
  if (!relaxed.feasible) {
    result.certificate.farkas = std::move(relaxed.farkas);
    return result;
  }

  // A disequality t != 0 fails only if the relaxed polyhedron lies inside
  // t = 0, i.e. both sides t < 0 and -t < 0 are infeasible.
  std::vector<Constraint> extended(constraints.begin(), constraints.end());
  extended.emplace_back();
  RealPoint point = relaxed.witness;
  std::vector<std::size_t> done;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    if (constraints[i].rel != Relation::Ne) continue;
    const LinTerm& t = constraints[i].term;
    if (sgn(t.evaluate(point)) != 0) {
      done.push_back(i);
      continue;
    }
    extended.back() = {t, Relation::Lt};
    Relaxed below = solve_relaxed(extended);
    RealPoint side;
    if (below.feasible) {
      side = std::move(below.witness);
    } else {
      extended.back() = {-t, Relation::Lt};
      Relaxed above = solve_relaxed(extended);
      if (!above.feasible) {
        result.certificate.split = DisequalitySplit{i, std::move(below.farkas), std::move(above.farkas)};
        return result;
      }
      side = std::move(above.witness);
    }
    // Move toward `side` just enough to leave t = 0 while every earlier
    // disequality stays nonzero; only finitely many steps are blocked.
    done.push_back(i);
    for (int n = 2;; ++n) {
      RealPoint candidate = blend(point, side, Rational(1, n));
      bool good = std::all_of(done.begin(), done.end(), [&](std::size_t j) {
        return sgn(constraints[j].term.evaluate(candidate)) != 0;
      });
      if (good) {
        point = std::move(candidate);
        break;
      }
    }
  }
  result.feasible = true;
  result.witness = std::move(point);
  return result;
}

}  // namespace

Constraint constraint_of(const Atom& atom, bool positive) {
  switch (atom.kind()) {
    case AtomKind::LinLeq:
      return positive ? Constraint{atom.term(), Relation::Le} : Constraint{-atom.term(), Relation::Lt};
    case AtomKind::LinEq: return {atom.term(), positive ? Relation::Eq : Relation::Ne};
    default: break;
  }
  throw NonTheoryLiteral("literal is not over a linear atom");
}

Constraint constraint_of(const AtomTable& atoms, Literal lit) {
  if (lit.var < 1 || static_cast<std::size_t>(lit.var) > atoms.size())
    throw NonTheoryLiteral("literal over unknown atom " + std::to_string(lit.var));
  return constraint_of(atoms.atom(lit.var), lit.positive);
}

bool satisfies(const RealPoint& point, const Constraint& c) {
  int s = sgn(c.term.evaluate(point));
  switch (c.rel) {
    case Relation::Le: return s <= 0;
    case Relation::Lt: return s < 0;
    case Relation::Eq: return s == 0;
    case Relation::Ne: return s != 0;
  }
  return false;
}

std::vector<std::size_t> FeasibilityResult::core() const {
  std::set<std::size_t> support;
  auto add = [&](const FarkasCertificate& f, std::size_t limit) {
    for (std::size_t i = 0; i < f.multipliers.size() && i < limit; ++i)
      if (sgn(f.multipliers[i]) != 0) support.insert(i);
  };
  if (certificate.split) {
    const DisequalitySplit& s = *certificate.split;
    std::size_t limit = s.below.multipliers.empty() ? 0 : s.below.multipliers.size() - 1;
    add(s.below, limit);
    add(s.above, limit);
    support.insert(s.index);
  } else {
    add(certificate.farkas, certificate.farkas.multipliers.size());
  }
  return {support.begin(), support.end()};
}

FeasibilityResult check_feasible(std::span<const Constraint> constraints) {
  FeasibilityResult result = solve(constraints);
#ifdef SMTKC_AUDIT
  if (result.feasible ? !verify_witness(constraints, result.witness)
                      : !verify_certificate(constraints, result.certificate))
    throw std::logic_error("check_feasible: result failed its own audit");
#endif
  if (g_observer) g_observer(constraints, result);
  return result;
}

FeasibilityResult check_feasible(const AtomTable& atoms, std::span<const Literal> literals) {
  std::vector<Constraint> cs;
  cs.reserve(literals.size());
  for (Literal l : literals) cs.push_back(constraint_of(atoms, l));
  return check_feasible(cs);
}

bool verify_witness(std::span<const Constraint> constraints, const RealPoint& witness) {
  return std::all_of(constraints.begin(), constraints.end(),
                     [&](const Constraint& c) { return satisfies(witness, c); });
}

bool verify_farkas(std::span<const Constraint> constraints, const FarkasCertificate& cert) {
  if (cert.multipliers.size() != constraints.size()) return false;
  LinTerm sum;
  bool strict = false;
  bool equality_only = true;
  bool any = false;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const Rational& k = cert.multipliers[i];
    if (sgn(k) == 0) continue;
    any = true;
    switch (constraints[i].rel) {
      case Relation::Ne: return false;
      case Relation::Eq: break;
      case Relation::Lt:
        if (sgn(k) < 0) return false;
        strict = true;
        equality_only = false;
        break;
      case Relation::Le:
        if (sgn(k) < 0) return false;
        equality_only = false;
        break;
    }
    sum += constraints[i].term * k;
  }
  if (!any || !sum.is_constant()) return false;
  int s = sgn(sum.constant_part());
  if (equality_only) return s != 0;
  return strict ? s >= 0 : s > 0;
}

bool verify_certificate(std::span<const Constraint> constraints, const Certificate& cert) {
  if (!cert.split) return verify_farkas(constraints, cert.farkas);
  const DisequalitySplit& s = *cert.split;
  if (s.index >= constraints.size() || constraints[s.index].rel != Relation::Ne) return false;
  std::vector<Constraint> extended(constraints.begin(), constraints.end());
  extended.push_back({constraints[s.index].term, Relation::Lt});
  if (!verify_farkas(extended, s.below)) return false;
  extended.back() = {-constraints[s.index].term, Relation::Lt};
  return verify_farkas(extended, s.above);
}

ScopedFeasibilityObserver::ScopedFeasibilityObserver(Callback cb) : previous_(std::move(g_observer)) {
  g_observer = std::move(cb);
}

ScopedFeasibilityObserver::~ScopedFeasibilityObserver() { g_observer = std::move(previous_); }

}  // namespace smtkc::lra
