#pragma once

// Boolean abstraction of QF_LRA formulas and Tseitin CNF conversion.

#include <optional>
#include <string>
#include <vector>

#include "smtkc/frontend.hpp"

namespace smtkc {

/// Bijection between Boolean variables 1..n and the theory/propositional atoms
/// they abstract. Variables above n are Tseitin auxiliaries and have no atom.
class AtomMap {
 public:
  AtomMap() = default;
  explicit AtomMap(AtomTable table);

  int num_atoms() const { return static_cast<int>(table_.size()); }
  bool has_atom(int var) const { return var >= 1 && var <= num_atoms(); }
  const Atom& atom(int var) const { return table_.atom(var); }
  std::optional<int> var_of(const Atom& atom) const { return table_.find(atom); }
  bool is_linear(int var) const { return has_atom(var) && atom(var).is_linear(); }
  /// Real variables of a linear atom; empty otherwise.
  const std::vector<RealVar>& real_vars(int var) const;
  int num_real_vars() const { return static_cast<int>(table_.real_names().size()); }

  const AtomTable& table() const { return table_; }
  std::string serialize(int var) const { return table_.serialize(var); }

 private:
  AtomTable table_;
  std::vector<std::vector<RealVar>> real_vars_;
};

/// Propositional skeleton: same tree shape as the source formula, leaves are
/// Boolean variables.
struct PropFormula {
  Expr root;
  int num_vars = 0;
};

struct Abstraction {
  PropFormula formula;
  AtomMap map;
};

Abstraction boolean_abstract(const Formula& f);

using Clause = std::vector<Literal>;

struct ClauseDb {
  int num_vars = 0;
  /// Variables 1..num_atom_vars abstract atoms; the rest are auxiliaries.
  int num_atom_vars = 0;
  std::vector<Clause> clauses;
  std::vector<bool> aux_mark;  // indexed by variable, entry 0 unused

  bool is_aux(int var) const { return var > num_atom_vars; }
  int add_aux_var();
  /// Sorts, drops duplicate literals; returns false for tautologies (not added).
  bool add_clause(Clause c);
};

/// Full biconditional Tseitin encoding after NNF conversion. Conjuncts that are
/// already clauses get no auxiliary variable.
ClauseDb to_cnf(const PropFormula& p);

/// DIMACS dump with `c atom <var> <atom>` comment lines ahead of the header.
std::string to_dimacs(const ClauseDb& db, const AtomMap& map);

}  // namespace smtkc
