#include <algorithm>

#include "smtkc/ddnnf.hpp"

namespace smtkc {

std::vector<NodeId> DdnnfGraph::reachable() const {
  if (nodes_.empty()) return {};
  std::vector<bool> seen(nodes_.size(), false);
  seen[root_] = true;
  // Children precede parents, so one descending sweep suffices.
  for (std::size_t i = root_ + 1; i-- > 0;) {
    if (!seen[i]) continue;
    for (NodeId c : nodes_[i].children) seen[c] = true;
  }
  std::vector<NodeId> out;
  for (NodeId i = 0; i < nodes_.size(); ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

std::size_t DdnnfGraph::reachable_edges() const {
  std::size_t edges = 0;
  for (NodeId id : reachable()) edges += nodes_[id].children.size();
  return edges;
}

GraphBuilder::GraphBuilder(int num_vars, int num_atom_vars) : num_vars_(num_vars), num_atom_vars_(num_atom_vars) {}

NodeId GraphBuilder::add(Node n) {
  std::string key;
  key.reserve(16 + 8 * n.children.size());
  key += static_cast<char>('0' + static_cast<int>(n.kind));
  switch (n.kind) {
    case NodeKind::Lit:
      key += std::to_string(n.lit.dimacs());
      key += n.implied ? "i" : "d";
      break;
    case NodeKind::Or: key += std::to_string(n.decision_var); [[fallthrough]];
    case NodeKind::And:
      for (NodeId c : n.children) {
        key += ',';
        key += std::to_string(c);
      }
      break;
    default: break;
  }
  auto [it, inserted] = unique_.try_emplace(std::move(key), static_cast<NodeId>(nodes_.size()));
  if (inserted) nodes_.push_back(std::move(n));
  return it->second;
}

NodeId GraphBuilder::true_node() { return add(Node{NodeKind::True, {}, 0, {}, false}); }

NodeId GraphBuilder::false_node() { return add(Node{NodeKind::False, {}, 0, {}, false}); }

NodeId GraphBuilder::literal(Literal lit, bool implied) {
  if (lit.var < 1 || lit.var > num_vars_) throw std::out_of_range("GraphBuilder: literal variable out of range");
  return add(Node{NodeKind::Lit, lit, 0, {}, implied});
}

NodeId GraphBuilder::conjoin(std::vector<NodeId> children) {
  std::vector<NodeId> kept;
  kept.reserve(children.size());
  for (NodeId c : children) {
    NodeKind k = nodes_.at(c).kind;
    if (k == NodeKind::False) return false_node();
    if (k != NodeKind::True) kept.push_back(c);
  }
  if (kept.empty()) return true_node();
  if (kept.size() == 1) return kept.front();
  return raw_and(std::move(kept));
}

NodeId GraphBuilder::decision(int var, NodeId positive, NodeId negative) {
  bool pos_dead = nodes_.at(positive).kind == NodeKind::False;
  bool neg_dead = nodes_.at(negative).kind == NodeKind::False;
  if (pos_dead && neg_dead) return false_node();
  if (pos_dead) return negative;
  if (neg_dead) return positive;
  return raw_or(var, {positive, negative});
}

NodeId GraphBuilder::raw_and(std::vector<NodeId> children) {
  for (NodeId c : children)
    if (c >= nodes_.size()) throw std::out_of_range("GraphBuilder: child id out of range");
  return add(Node{NodeKind::And, {}, 0, std::move(children), false});
}

NodeId GraphBuilder::raw_or(int decision_var, std::vector<NodeId> children) {
  for (NodeId c : children)
    if (c >= nodes_.size()) throw std::out_of_range("GraphBuilder: child id out of range");
  return add(Node{NodeKind::Or, {}, decision_var, std::move(children), false});
}

DdnnfGraph GraphBuilder::finish(NodeId root, std::shared_ptr<const AtomMap> atoms, bool tagged) const {
  if (root >= nodes_.size()) throw std::out_of_range("GraphBuilder::finish: root out of range");
  DdnnfGraph g;
  g.nodes_.assign(nodes_.begin(), nodes_.begin() + root + 1);
  g.root_ = root;
  g.num_vars_ = num_vars_;
  g.num_atom_vars_ = num_atom_vars_;
  g.atoms_ = std::move(atoms);
  g.tagged_ = tagged;
  g.vars_.resize(g.nodes_.size());
  for (std::size_t i = 0; i < g.nodes_.size(); ++i) {
    const Node& n = g.nodes_[i];
    std::vector<int>& vs = g.vars_[i];
    if (n.kind == NodeKind::Lit) {
      vs.push_back(n.lit.var);
      continue;
    }
    for (NodeId c : n.children) {
      const std::vector<int>& cv = g.vars_[c];
      std::vector<int> merged;
      merged.reserve(vs.size() + cv.size());
      std::set_union(vs.begin(), vs.end(), cv.begin(), cv.end(), std::back_inserter(merged));
      vs = std::move(merged);
    }
  }
  return g;
}

}  // namespace smtkc
