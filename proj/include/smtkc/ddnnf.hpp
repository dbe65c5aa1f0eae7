#pragma once

// Compiled target language: an NNF DAG whose Or nodes are binary decisions.
// Counting, enumeration, validation, condensation and c2d-style file I/O.

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "smtkc/abstraction.hpp"
#include "smtkc/rational.hpp"

namespace smtkc {

using NodeId = std::uint32_t;

enum class NodeKind : std::uint8_t { True, False, Lit, And, Or };

struct Node {
  NodeKind kind = NodeKind::True;
  Literal lit;                   // Lit
  int decision_var = 0;          // Or; 0 when unknown
  std::vector<NodeId> children;  // And, Or
  bool implied = false;          // Lit entailed by the theory rather than decided
};

class NotTotal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class MissingWeight : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NotTagged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable DAG; children always precede parents.
class DdnnfGraph {
 public:
  const Node& node(NodeId id) const { return nodes_.at(id); }
  std::size_t size() const { return nodes_.size(); }
  NodeId root() const { return root_; }
  int num_vars() const { return num_vars_; }
  int num_atom_vars() const { return num_atom_vars_; }
  bool is_aux(int var) const { return var > num_atom_vars_; }

  /// Atom map of the compiled formula; null for hand-built graphs.
  const std::shared_ptr<const AtomMap>& atom_map() const { return atoms_; }
  /// True when implied-literal provenance was recorded.
  bool tagged() const { return tagged_; }

  /// All variables (atoms and auxiliaries) below a node, ascending.
  const std::vector<int>& vars(NodeId id) const { return vars_.at(id); }
  /// Ids of the nodes reachable from the root, ascending.
  std::vector<NodeId> reachable() const;
  std::size_t reachable_edges() const;

 private:
  friend class GraphBuilder;

  std::vector<Node> nodes_;
  std::vector<std::vector<int>> vars_;
  NodeId root_ = 0;
  int num_vars_ = 0;
  int num_atom_vars_ = 0;
  std::shared_ptr<const AtomMap> atoms_;
  bool tagged_ = false;
};

/// Hash-consing node factory. `conjoin` and `decision` simplify constants;
/// the raw_* forms build exactly what they are given.
class GraphBuilder {
 public:
  GraphBuilder(int num_vars, int num_atom_vars);

  NodeId true_node();
  NodeId false_node();
  NodeId literal(Literal lit, bool implied = false);
  NodeId conjoin(std::vector<NodeId> children);
  /// Or over a decision on `var`; dead (False) branches collapse away.
  NodeId decision(int var, NodeId positive, NodeId negative);

  NodeId raw_and(std::vector<NodeId> children);
  NodeId raw_or(int decision_var, std::vector<NodeId> children);

  const Node& node(NodeId id) const { return nodes_.at(id); }
  std::size_t size() const { return nodes_.size(); }

  DdnnfGraph finish(NodeId root, std::shared_ptr<const AtomMap> atoms = nullptr, bool tagged = false) const;

 private:
  NodeId add(Node n);

  int num_vars_;
  int num_atom_vars_;
  std::vector<Node> nodes_;
  std::unordered_map<std::string, NodeId> unique_;
};

/// Per-literal nonnegative weights; literals without an entry weigh 1 unless
/// the map is strict.
class WeightMap {
 public:
  WeightMap() = default;
  explicit WeightMap(bool strict) : strict_(strict) {}

  void set(Literal lit, Rational w);
  Rational weight(Literal lit) const;

 private:
  bool strict_ = false;
  std::map<Literal, Rational> weights_;
};

/// Total assignment over atom variables, ascending by variable.
using Assignment = std::vector<Literal>;

BigInt count(const DdnnfGraph& g);
Rational weighted_count(const DdnnfGraph& g, const WeightMap& w);
std::vector<Assignment> enumerate(const DdnnfGraph& g, std::size_t cap);

enum class ValidationLevel : std::uint8_t { Structural, Theory };

struct Violation {
  enum class Kind : std::uint8_t { Determinism, Decomposability, Totality, TheoryUnsat };
  Kind kind;
  NodeId node = 0;
  std::string detail;
  Assignment assignment;  // TheoryUnsat only
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool theory_checked = false;
  std::size_t assignments_checked = 0;
  std::string note;

  bool ok() const { return violations.empty(); }
  std::size_t count(Violation::Kind kind) const;
};

const char* to_string(Violation::Kind kind);

inline constexpr std::size_t kDefaultTheoryBound = 4096;

ValidationReport validate(const DdnnfGraph& g, ValidationLevel level, std::size_t theory_bound = kDefaultTheoryBound);

/// Drops theory-implied literal nodes. The result is for inspection/export.
DdnnfGraph condense(const DdnnfGraph& g);

struct NnfFiles {
  std::string nnf;
  std::string atoms;
};

NnfFiles export_nnf(const DdnnfGraph& g);
DdnnfGraph import_nnf(std::string_view nnf, std::string_view atoms);

}  // namespace smtkc
