#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tailcalc {

using NodeId = std::string;
using DirectedEdge = std::pair<NodeId, NodeId>;

// Undirected tree on opaque string node ids. Immutable after construction;
// path queries use parent pointers from a canonical root (the
// lexicographically smallest id).
class Tree {
 public:
  Tree(std::vector<NodeId> nodes,
       std::vector<std::pair<NodeId, NodeId>> edges);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<std::pair<NodeId, NodeId>>& edges() const {
    return edges_;
  }
  bool has_node(const NodeId& v) const;
  // Neighbours in ascending id order.
  const std::vector<NodeId>& neighbors(const NodeId& v) const;

 private:
  std::vector<NodeId> nodes_;                           // sorted
  std::vector<std::pair<NodeId, NodeId>> edges_;        // canonical a < b
  std::map<NodeId, std::vector<NodeId>> adjacency_;
  std::map<NodeId, NodeId> parent_;  // w.r.t. canonical root
  std::map<NodeId, int> depth_;

  friend std::vector<DirectedEdge> path(const Tree&, const NodeId&,
                                        const NodeId&);
};

struct RootedTree {
  Tree base;
  NodeId root;
  // E_u in breadth-first order, children visited lexicographically.
  std::vector<DirectedEdge> directed_edges;
  std::map<NodeId, NodeId> parent;  // every non-root node
};

// Validates and builds a Tree. Throws ConfigError on duplicate ids, unknown
// endpoints, self-loops, cycles, or a disconnected edge set.
Tree parse_tree(const std::vector<NodeId>& nodes,
                const std::vector<std::pair<NodeId, NodeId>>& edges);

RootedTree root_tree(const Tree& t, const NodeId& u);

// The unique path from u to v as directed edges. u == v is rejected; callers
// use Theta_{u,u} = 1 directly.
std::vector<DirectedEdge> path(const Tree& t, const NodeId& u,
                               const NodeId& v);

}  // namespace tailcalc
