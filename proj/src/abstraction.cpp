#include <algorithm>
#include <sstream>

#include "smtkc/abstraction.hpp"

namespace smtkc {

AtomMap::AtomMap(AtomTable table) : table_(std::move(table)) {
  real_vars_.resize(table_.size() + 1);
  for (int v = 1; v <= num_atoms(); ++v)
    if (atom(v).is_linear()) real_vars_[static_cast<std::size_t>(v)] = atom(v).term().variables();
}

const std::vector<RealVar>& AtomMap::real_vars(int var) const {
  static const std::vector<RealVar> kNone;
  if (!has_atom(var)) return kNone;
  return real_vars_[static_cast<std::size_t>(var)];
}

Abstraction boolean_abstract(const Formula& f) {
  // Atom ids are already dense, so abstraction variable i stands for atom i.
  Abstraction out;
  out.formula.root = f.root;
  out.formula.num_vars = static_cast<int>(f.atoms.size());
  out.map = AtomMap(f.atoms);
  return out;
}

int ClauseDb::add_aux_var() {
  ++num_vars;
  aux_mark.resize(static_cast<std::size_t>(num_vars) + 1, false);
  aux_mark[static_cast<std::size_t>(num_vars)] = true;
  return num_vars;
}

bool ClauseDb::add_clause(Clause c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    if (c[i].var == c[i + 1].var) return false;
  clauses.push_back(std::move(c));
  return true;
}

namespace {

using Kind = Expr::Kind;

// Flattens, folds constants and duplicate/complementary literals.
Expr junction(Kind kind, std::vector<Expr> kids) {
  const Kind absorbing = kind == Kind::And ? Kind::False : Kind::True;
  const Kind neutral = kind == Kind::And ? Kind::True : Kind::False;
  std::vector<Expr> flat;
  for (Expr& k : kids) {
    if (k.kind == kind) {
      for (Expr& g : k.kids) flat.push_back(std::move(g));
    } else {
      flat.push_back(std::move(k));
    }
  }
  std::vector<Expr> out;
  for (Expr& k : flat) {
    if (k.kind == absorbing) return Expr{absorbing, {}, {}};
    if (k.kind == neutral) continue;
    if (k.kind == Kind::Lit) {
      bool dup = false;
      for (const Expr& o : out) {
        if (o.kind != Kind::Lit || o.lit.var != k.lit.var) continue;
        if (o.lit.positive != k.lit.positive) return Expr{absorbing, {}, {}};
        dup = true;
      }
      if (dup) continue;
    } else if (std::find(out.begin(), out.end(), k) != out.end()) {
      continue;
    }
    out.push_back(std::move(k));
  }
  if (out.empty()) return Expr{neutral, {}, {}};
  if (out.size() == 1) return std::move(out.front());
  return Expr{kind, {}, std::move(out)};
}

Expr to_nnf(const Expr& e, bool negate) {
  switch (e.kind) {
    case Kind::True: return negate ? Expr::falsity() : Expr::truth();
    case Kind::False: return negate ? Expr::truth() : Expr::falsity();
    case Kind::Lit: return Expr::literal(negate ? ~e.lit : e.lit);
    case Kind::Not: return to_nnf(e.kids.front(), !negate);
    case Kind::And:
    case Kind::Or: {
      std::vector<Expr> kids;
      kids.reserve(e.kids.size());
      for (const Expr& k : e.kids) kids.push_back(to_nnf(k, negate));
      bool conj = (e.kind == Kind::And) != negate;
      return junction(conj ? Kind::And : Kind::Or, std::move(kids));
    }
    case Kind::Implies: {
      // a => b  ==  !a | b ;  !(a => b)  ==  a & !b
      std::vector<Expr> kids;
      kids.push_back(to_nnf(e.kids[0], !negate));
      kids.push_back(to_nnf(e.kids[1], negate));
      return junction(negate ? Kind::And : Kind::Or, std::move(kids));
    }
  }
  return Expr::truth();
}

class TseitinEncoder {
 public:
  explicit TseitinEncoder(ClauseDb& db) : db_(db) {}

  Literal encode(const Expr& e) {
    if (e.kind == Kind::Lit) return e.lit;
    std::vector<Literal> inputs;
    inputs.reserve(e.kids.size());
    for (const Expr& k : e.kids) inputs.push_back(encode(k));
    Literal gate{db_.add_aux_var(), true};
    Clause wide;
    if (e.kind == Kind::And) {
      // g <-> AND(x): (!g | x_i) for all i, (g | !x_1 | ... | !x_k)
      wide.push_back(gate);
      for (Literal x : inputs) {
        db_.add_clause({~gate, x});
        wide.push_back(~x);
      }
    } else {
      // g <-> OR(x): (g | !x_i) for all i, (!g | x_1 | ... | x_k)
      wide.push_back(~gate);
      for (Literal x : inputs) {
        db_.add_clause({gate, ~x});
        wide.push_back(x);
      }
    }
    db_.add_clause(std::move(wide));
    return gate;
  }

 private:
  ClauseDb& db_;
};

}  // namespace

ClauseDb to_cnf(const PropFormula& p) {
  ClauseDb db;
  db.num_vars = p.num_vars;
  db.num_atom_vars = p.num_vars;
  db.aux_mark.assign(static_cast<std::size_t>(p.num_vars) + 1, false);

  Expr root = to_nnf(p.root, false);
  if (root.kind == Kind::True) return db;
  if (root.kind == Kind::False) {
    db.clauses.emplace_back();
    return db;
  }
  std::vector<Expr> conjuncts;
  if (root.kind == Kind::And)
    conjuncts = std::move(root.kids);
  else
    conjuncts.push_back(std::move(root));

  TseitinEncoder enc(db);
  for (const Expr& c : conjuncts) {
    if (c.kind == Kind::Lit) {
      db.add_clause({c.lit});
    } else if (c.kind == Kind::Or) {
      Clause clause;
      for (const Expr& k : c.kids) clause.push_back(enc.encode(k));
      db.add_clause(std::move(clause));
    } else {
      db.add_clause({enc.encode(c)});
    }
  }
  return db;
}

std::string to_dimacs(const ClauseDb& db, const AtomMap& map) {
  std::ostringstream os;
  for (int v = 1; v <= db.num_atom_vars && map.has_atom(v); ++v) os << "c atom " << v << ' ' << map.serialize(v) << '\n';
  os << "p cnf " << db.num_vars << ' ' << db.clauses.size() << '\n';
  for (const Clause& c : db.clauses) {
    for (Literal l : c) os << l.dimacs() << ' ';
    os << "0\n";
  }
  return os.str();
}

}  // namespace smtkc
