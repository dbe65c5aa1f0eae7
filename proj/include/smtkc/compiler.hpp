#pragma once

// Exhaustive DPLL(T) search whose trace is recorded as a d-DNNF graph.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "smtkc/abstraction.hpp"
#include "smtkc/ddnnf.hpp"

namespace smtkc {

enum class CompileMode : std::uint8_t { Lazy, Eager, Agnostic };
enum class Heuristic : std::uint8_t { Dlcs, FixedOrder };

const char* to_string(CompileMode m);
const char* to_string(Heuristic h);

struct CompileConfig {
  CompileMode mode = CompileMode::Lazy;
  bool components = true;
  bool cache = true;
  bool learning = true;
  /// Entailment checks per propagation round; negative means twice the number
  /// of candidate atoms.
  long long propagation_budget = -1;
  Heuristic heuristic = Heuristic::Dlcs;
  /// Applied by callers when exporting; the compiled graph is always total.
  bool condense_output = false;
  /// Accepted for reproducibility of command lines; both heuristics are deterministic.
  std::uint64_t random_seed = 0;
  /// Eager lemma size bound; negative means the number of linear atoms.
  int eager_k = -1;
  /// Recompile every cache hit without the cache and compare model counts.
  bool verify_cache_hits = false;
};

struct CompileStats {
  std::uint64_t decisions = 0;
  std::uint64_t bool_props = 0;
  std::uint64_t theory_props = 0;
  std::uint64_t theory_checks = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t learned = 0;
  std::uint64_t components = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;
  std::uint64_t nodes = 0;
  std::uint64_t edges = 0;
  double wall_ms = 0;

  /// `key value` lines in a fixed key order.
  std::string to_text() const;
  std::string to_json() const;
};

/// Per-variable truth value: 0 unassigned, 1 true, -1 false. Entry 0 unused.
using PartialAssignment = std::vector<std::int8_t>;

inline std::int8_t value_of(const PartialAssignment& a, Literal lit) {
  std::int8_t v = a.at(static_cast<std::size_t>(lit.var));
  return lit.positive ? v : static_cast<std::int8_t>(-v);
}

struct UnitResult {
  std::vector<Literal> implied;
  std::optional<std::size_t> conflict;  // index of a falsified clause
};

/// Unit propagation to fixpoint from `assignment` (sized num_vars + 1).
UnitResult unit_propagate(const ClauseDb& db, const PartialAssignment& assignment);

struct Component {
  std::vector<std::size_t> clauses;  // residual clause indices into db.clauses
  std::vector<int> vars;             // unassigned Boolean variables, ascending
  std::vector<RealVar> real_vars;    // ascending
  std::vector<Literal> trail;        // asserted theory literals over real_vars, ascending
};

/// Partitions the residual problem: clauses are connected through shared
/// Boolean variables, and in lazy mode also through real variables of
/// unassigned atoms and of the asserted theory literals in `trail`.
/// Unassigned atoms without residual clauses are included; auxiliaries only
/// when they occur in a residual clause. `within` restricts to a component.
std::vector<Component> split_components(const ClauseDb& db, const AtomMap& map, const PartialAssignment& assignment,
                                        std::span<const Literal> trail, const CompileConfig& cfg,
                                        const Component* within = nullptr);

class NoUnassigned : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Branching literal for a component, always of positive polarity.
Literal decide(const ClauseDb& db, const PartialAssignment& assignment, const Component& comp, Heuristic h);

/// Disjunction of the negated core literals.
Clause learn_theory_clause(std::span<const Literal> core);

/// Variables, residual clauses and projected trail of a component.
std::string make_cache_key(const ClauseDb& db, const PartialAssignment& assignment, const Component& comp);

class ComponentCache {
 public:
  std::optional<NodeId> lookup(const std::string& key) const;
  void store(const std::string& key, NodeId node);
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, NodeId> entries_;
};

/// Compiles `db` (atoms 1..db.num_atom_vars per `map`). Unsatisfiable input
/// yields the False node.
DdnnfGraph compile(const ClauseDb& db, const AtomMap& map, const CompileConfig& cfg, CompileStats* stats = nullptr);

/// Abstraction, CNF conversion, eager lemmas when cfg.mode is Eager, then compile.
DdnnfGraph compile_formula(const Formula& f, const CompileConfig& cfg, CompileStats* stats = nullptr);

}  // namespace smtkc
