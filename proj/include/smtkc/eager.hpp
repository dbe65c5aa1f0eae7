#pragma once

// Eager theory lemmas: blocking clauses for every small theory-infeasible
// combination of linear atom literals, so a purely propositional search over
// the result never visits a theory-inconsistent assignment.

#include <span>
#include <vector>

#include "smtkc/abstraction.hpp"

namespace smtkc {

/// All minimal theory-infeasible literal sets over distinct atoms among
/// `atom_vars` (both polarities) with at most `k` literals. Each set is
/// ascending; the list is ordered by size, then lexicographically.
std::vector<std::vector<Literal>> enumerate_infeasible_cores(const AtomTable& atoms, std::span<const int> atom_vars, int k);

/// `db` plus one clause per core over its linear atoms. A negative `k` means
/// the number of linear atoms, which makes the encoding complete.
ClauseDb eager_encode(ClauseDb db, const AtomMap& map, int k = -1);

}  // namespace smtkc
