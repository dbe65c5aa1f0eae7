#include "smtkc/lra_solver.hpp"

namespace smtkc::lra {

std::vector<Literal> minimize_core(const AtomTable& atoms, std::vector<Literal> core) {
  if (check_feasible(atoms, core).feasible) throw NotInfeasible("minimize_core: input set is feasible");
  for (std::size_t i = 0; i < core.size();) {
    std::vector<Literal> without;
    without.reserve(core.size() - 1);
    for (std::size_t j = 0; j < core.size(); ++j)
      if (j != i) without.push_back(core[j]);
    if (!check_feasible(atoms, without).feasible)
      core = std::move(without);
    else
      ++i;
  }
  return core;
}

const Atom& TheoryState::linear_atom(Literal lit) const {
  if (lit.var < 1 || static_cast<std::size_t>(lit.var) > atoms_->size())
    throw NonTheoryLiteral("literal over unknown atom " + std::to_string(lit.var));
  const Atom& a = atoms_->atom(lit.var);
  if (!a.is_linear()) throw NonTheoryLiteral("atom " + std::to_string(lit.var) + " is propositional");
  return a;
}

std::vector<Constraint> TheoryState::constraints_with(const Constraint& extra) const {
  std::vector<Constraint> cs;
  cs.reserve(trail_.size() + 1);
  for (const Entry& e : trail_) cs.push_back(e.constraint);
  cs.push_back(extra);
  return cs;
}

TheoryState::AssertResult TheoryState::assert_literal(Literal lit, int level) {
  const Atom& atom = linear_atom(lit);
  if (level < top_level()) throw std::invalid_argument("assert_literal: level below the trail top");
  Constraint c = constraint_of(atom, lit.positive);
  if (satisfies(witness(), c)) {
    RealPoint w = witness();
    trail_.push_back({lit, std::move(c), level, std::move(w)});
    return {};
  }
  std::vector<Constraint> cs = constraints_with(c);
  ++checks_;
  FeasibilityResult r = check_feasible(cs);
  if (r.feasible) {
    trail_.push_back({lit, std::move(c), level, std::move(r.witness)});
    return {};
  }
  AssertResult out;
  out.ok = false;
  bool has_lit = false;
  for (std::size_t i : r.core()) {
    Literal l = i < trail_.size() ? trail_[i].lit : lit;
    has_lit |= i == trail_.size();
    out.core.push_back(l);
  }
  if (!has_lit) out.core.push_back(lit);
  return out;
}

void TheoryState::pop_to_level(int level) {
  while (!trail_.empty() && trail_.back().level > level) trail_.pop_back();
}

bool TheoryState::entails(Literal lit) {
  Constraint negated = constraint_of(linear_atom(lit), !lit.positive);
  if (satisfies(witness(), negated)) return false;
  ++checks_;
  return !check_feasible(constraints_with(negated)).feasible;
}

std::vector<Literal> TheoryState::propagate_candidates(std::span<const int> unassigned, std::size_t budget) {
  std::vector<Literal> out;
  std::size_t spent = 0;
  for (int var : unassigned) {
    if (spent >= budget) break;
    if (var < 1 || static_cast<std::size_t>(var) > atoms_->size() || !atoms_->atom(var).is_linear()) continue;
    // Only the polarity the current witness satisfies can be entailed.
    bool positive = holds(atoms_->atom(var), true, witness());
    ++spent;
    if (entails({var, positive})) out.push_back({var, positive});
  }
  return out;
}

std::vector<Literal> TheoryState::literals() const {
  std::vector<Literal> out;
  out.reserve(trail_.size());
  for (const Entry& e : trail_) out.push_back(e.lit);
  return out;
}

}  // namespace smtkc::lra
