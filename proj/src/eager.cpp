#include "smtkc/eager.hpp"

#include <algorithm>

#include "smtkc/lra_solver.hpp"

namespace smtkc {

namespace {

struct CoreSearch {
  const AtomTable& atoms;
  std::span<const int> vars;
  std::size_t k;
  std::vector<std::vector<Literal>> found;
  std::vector<Literal> current;

  // `witness` satisfies `current`; extensions it also satisfies need no check.
  void extend(std::size_t next, const RealPoint& witness) {
    if (current.size() >= k) return;
    for (std::size_t i = next; i < vars.size(); ++i) {
      for (bool positive : {true, false}) {
        Literal l{vars[i], positive};
        current.push_back(l);
        if (holds(atoms.atom(l.var), positive, witness)) {
          extend(i + 1, witness);
        } else {
          lra::FeasibilityResult r = lra::check_feasible(atoms, current);
          if (r.feasible)
            extend(i + 1, r.witness);
          else
            found.push_back(current);
        }
        current.pop_back();
      }
    }
  }
};

bool contains(const std::vector<Literal>& big, const std::vector<Literal>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

std::vector<std::vector<Literal>> enumerate_infeasible_cores(const AtomTable& atoms, std::span<const int> atom_vars, int k) {
  if (k < 1) throw std::invalid_argument("enumerate_infeasible_cores: k must be positive");
  std::vector<int> vars(atom_vars.begin(), atom_vars.end());
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  for (int v : vars)
    if (!atoms.atom(v).is_linear()) throw std::invalid_argument("enumerate_infeasible_cores: atom " + std::to_string(v) + " is not linear");

  CoreSearch search{atoms, vars, static_cast<std::size_t>(k), {}, {}};
  search.extend(0, RealPoint{});
  std::vector<std::vector<Literal>>& sets = search.found;
  for (std::vector<Literal>& s : sets) std::sort(s.begin(), s.end());
  std::sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  // Every minimal core is reached through feasible prefixes; drop the rest.
  std::vector<std::vector<Literal>> cores;
  for (std::vector<Literal>& s : sets) {
    bool minimal = std::none_of(cores.begin(), cores.end(), [&](const auto& c) { return contains(s, c); });
    if (minimal) cores.push_back(std::move(s));
  }
  return cores;
}

ClauseDb eager_encode(ClauseDb db, const AtomMap& map, int k) {
  std::vector<int> linear;
  for (int v = 1; v <= db.num_atom_vars; ++v)
    if (map.is_linear(v)) linear.push_back(v);
  if (linear.empty()) return db;
  int bound = k < 0 ? static_cast<int>(linear.size()) : k;
  if (bound == 0) return db;
  for (const std::vector<Literal>& core : enumerate_infeasible_cores(map.table(), linear, bound)) {
    Clause c;
    for (Literal l : core) c.push_back(~l);
    db.add_clause(std::move(c));
  }
  return db;
}

}  // namespace smtkc
