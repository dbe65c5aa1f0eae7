#include "smtkc/oracle.hpp"

#include "smtkc/lra_solver.hpp"

namespace smtkc {

namespace {

template <typename Visit>
void truth_table(const Formula& f, Visit&& visit) {
  const int n = static_cast<int>(f.atoms.size());
  if (n > kOracleMaxAtoms) throw TooLarge("oracle: " + std::to_string(n) + " atoms exceed " + std::to_string(kOracleMaxAtoms));
  std::vector<bool> values(static_cast<std::size_t>(n) + 1, false);
  std::vector<Literal> linear;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (int v = 1; v <= n; ++v) values[static_cast<std::size_t>(v)] = (mask >> (n - v)) & 1;
    if (!evaluate(f.root, values)) continue;
    linear.clear();
    for (int v = 1; v <= n; ++v)
      if (f.atoms.atom(v).is_linear()) linear.push_back({v, values[static_cast<std::size_t>(v)]});
    bool feasible = linear.empty() || lra::check_feasible(f.atoms, linear).feasible;
    visit(values, feasible);
  }
}

}  // namespace

BruteCounts brute_counts(const Formula& f) {
  BruteCounts c;
  truth_table(f, [&](const std::vector<bool>&, bool feasible) {
    ++c.agnostic;
    if (feasible) ++c.aware;
  });
  return c;
}

std::vector<Assignment> brute_enumerate(const Formula& f) {
  std::vector<Assignment> out;
  truth_table(f, [&](const std::vector<bool>& values, bool feasible) {
    if (!feasible) return;
    Assignment a;
    for (std::size_t v = 1; v < values.size(); ++v) a.push_back({static_cast<int>(v), values[v]});
    out.push_back(std::move(a));
  });
  return out;
}

}  // namespace smtkc
