#pragma once

// Exact feasibility for conjunctions of linear rational constraints by
// Fourier-Motzkin elimination, with Farkas certificates, plus the incremental
// theory trail used during search.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "smtkc/frontend.hpp"

namespace smtkc::lra {

/// `term REL 0`.
enum class Relation : std::uint8_t { Le, Lt, Eq, Ne };

struct Constraint {
  LinTerm term;
  Relation rel = Relation::Le;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

class NonTheoryLiteral : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotInfeasible : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// !(t <= 0) is -t < 0; !(t = 0) is t != 0.
Constraint constraint_of(const Atom& atom, bool positive);
Constraint constraint_of(const AtomTable& atoms, Literal lit);

bool satisfies(const RealPoint& point, const Constraint& c);

/// One multiplier per constraint of the checked system. Multipliers on Le/Lt
/// rows are nonnegative, Eq rows take either sign, Ne rows are zero.
struct FarkasCertificate {
  std::vector<Rational> multipliers;
};

/// Infeasibility caused by a disequality t != 0: the relaxed system forces
/// t = 0. `below` refutes the system extended by t < 0, `above` the system
/// extended by -t < 0; in both the extra constraint is the last row.
struct DisequalitySplit {
  std::size_t index = 0;
  FarkasCertificate below;
  FarkasCertificate above;
};

struct Certificate {
  FarkasCertificate farkas;
  std::optional<DisequalitySplit> split;
};

struct FeasibilityResult {
  bool feasible = false;
  RealPoint witness;        // when feasible
  Certificate certificate;  // when infeasible

  /// Indices of constraints the certificate uses; an infeasible subset.
  std::vector<std::size_t> core() const;
};

FeasibilityResult check_feasible(std::span<const Constraint> constraints);
FeasibilityResult check_feasible(const AtomTable& atoms, std::span<const Literal> literals);

bool verify_witness(std::span<const Constraint> constraints, const RealPoint& witness);
bool verify_farkas(std::span<const Constraint> constraints, const FarkasCertificate& cert);
bool verify_certificate(std::span<const Constraint> constraints, const Certificate& cert);

/// Installs a per-thread callback invoked with every check_feasible result.
class ScopedFeasibilityObserver {
 public:
  using Callback = std::function<void(std::span<const Constraint>, const FeasibilityResult&)>;
  explicit ScopedFeasibilityObserver(Callback cb);
  ~ScopedFeasibilityObserver();
  ScopedFeasibilityObserver(const ScopedFeasibilityObserver&) = delete;
  ScopedFeasibilityObserver& operator=(const ScopedFeasibilityObserver&) = delete;

 private:
  Callback previous_;
};

/// Deletion-based minimization: one feasibility call per element.
std::vector<Literal> minimize_core(const AtomTable& atoms, std::vector<Literal> core);

/// Assertion trail of theory literals with decision levels. Each frame keeps a
/// witness of the trail so far; a new literal already satisfied by it costs no
/// elimination run.
class TheoryState {
 public:
  struct Entry {
    Literal lit;
    Constraint constraint;
    int level = 0;
    RealPoint witness;
  };

  struct AssertResult {
    bool ok = true;
    std::vector<Literal> core;  // on conflict; contains the asserted literal
  };

  explicit TheoryState(const AtomTable& atoms) : atoms_(&atoms) {}

  AssertResult assert_literal(Literal lit, int level);
  void pop_to_level(int level);
  /// trail /\ !lit infeasible.
  bool entails(Literal lit);
  /// Entailed literals among `unassigned` atom ids, spending at most `budget`
  /// entailment checks. Non-linear atoms are skipped.
  std::vector<Literal> propagate_candidates(std::span<const int> unassigned, std::size_t budget);

  int top_level() const { return trail_.empty() ? 0 : trail_.back().level; }
  const std::vector<Entry>& trail() const { return trail_; }
  std::vector<Literal> literals() const;
  const RealPoint& witness() const { return trail_.empty() ? empty_ : trail_.back().witness; }
  /// Number of elimination runs performed.
  std::uint64_t checks() const { return checks_; }

 private:
  const Atom& linear_atom(Literal lit) const;
  std::vector<Constraint> constraints_with(const Constraint& extra) const;

  const AtomTable* atoms_;
  std::vector<Entry> trail_;
  RealPoint empty_;
  std::uint64_t checks_ = 0;
};

}  // namespace smtkc::lra
