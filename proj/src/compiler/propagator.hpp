#pragma once

#include <optional>
#include <vector>

#include "smtkc/compiler.hpp"

namespace smtkc::detail {

/// Two-watched-literal unit propagation over a growing clause arena. Undo is
/// chronological and leaves the watches untouched.
class Propagator {
 public:
  explicit Propagator(const ClauseDb& db);

  const PartialAssignment& assignment() const { return value_; }
  std::int8_t value(Literal lit) const { return value_of(value_, lit); }
  const std::vector<Literal>& trail() const { return trail_; }
  std::size_t num_original() const { return num_original_; }
  const std::vector<Clause>& clauses() const { return clauses_; }

  /// Clause indices that were empty or unit on construction.
  const std::vector<std::size_t>& initial_units() const { return units_; }
  bool has_empty_clause() const { return empty_clause_; }

  /// Assigns an unassigned literal without propagating.
  void assign(Literal lit);
  /// Propagates pending assignments; returns a falsified clause on conflict.
  std::optional<std::size_t> propagate();
  void undo(std::size_t trail_size);

  /// Adds a clause whose literals are all false under the current assignment.
  /// Its watches go to the two most recently assigned literals.
  void add_learned(Clause c);

 private:
  void watch(std::size_t ci);
  std::vector<std::size_t>& watchers(Literal lit) { return watches_[2 * static_cast<std::size_t>(lit.var) + lit.positive]; }

  std::vector<Clause> clauses_;
  std::size_t num_original_ = 0;
  std::vector<std::vector<std::size_t>> watches_;  // by false-making literal
  PartialAssignment value_;
  std::vector<std::size_t> position_;  // trail index per variable
  std::vector<Literal> trail_;
  std::size_t qhead_ = 0;
  std::vector<std::size_t> units_;
  bool empty_clause_ = false;
};

}  // namespace smtkc::detail
