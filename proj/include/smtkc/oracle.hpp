#pragma once

// Brute-force ground truth by truth-table enumeration over all atoms.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "smtkc/ddnnf.hpp"
#include "smtkc/frontend.hpp"

namespace smtkc {

class TooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kOracleMaxAtoms = 24;

struct BruteCounts {
  std::uint64_t agnostic = 0;  // Boolean models
  std::uint64_t aware = 0;     // Boolean models whose linear literals are jointly feasible
};

BruteCounts brute_counts(const Formula& f);

/// Theory-consistent models in lexicographic order (false before true, atom 1
/// most significant).
std::vector<Assignment> brute_enumerate(const Formula& f);

}  // namespace smtkc
