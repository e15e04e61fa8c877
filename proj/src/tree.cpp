#include "tailcalc/tree.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "tailcalc/errors.hpp"

namespace tailcalc {

Tree::Tree(std::vector<NodeId> nodes,
           std::vector<std::pair<NodeId, NodeId>> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (const auto& [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& [v, nbrs] : adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
  }
  // Parent pointers from the canonical root (smallest id).
  const NodeId& canon = nodes_.front();
  depth_[canon] = 0;
  std::deque<NodeId> queue{canon};
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (const NodeId& w : adjacency_[v]) {
      if (depth_.count(w)) continue;
      depth_[w] = depth_[v] + 1;
      parent_[w] = v;
      queue.push_back(w);
    }
  }
}

bool Tree::has_node(const NodeId& v) const {
  return std::binary_search(nodes_.begin(), nodes_.end(), v);
}

const std::vector<NodeId>& Tree::neighbors(const NodeId& v) const {
  static const std::vector<NodeId> empty;
  auto it = adjacency_.find(v);
  return it == adjacency_.end() ? empty : it->second;
}

Tree parse_tree(const std::vector<NodeId>& nodes,
                const std::vector<std::pair<NodeId, NodeId>>& edges) {
  if (nodes.size() < 2) {
    throw ConfigError("tree: at least 2 nodes required");
  }
  std::vector<NodeId> sorted_nodes = nodes;
  std::sort(sorted_nodes.begin(), sorted_nodes.end());
  for (std::size_t i = 1; i < sorted_nodes.size(); ++i) {
    if (sorted_nodes[i] == sorted_nodes[i - 1]) {
      throw ConfigError("tree: duplicate node id '" + sorted_nodes[i] + "'");
    }
  }
  auto known = [&](const NodeId& v) {
    return std::binary_search(sorted_nodes.begin(), sorted_nodes.end(), v);
  };

  std::vector<std::pair<NodeId, NodeId>> canon;
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& [a, b] : edges) {
    if (a == b) throw ConfigError("tree: self-loop at node '" + a + "'");
    if (!known(a)) throw ConfigError("tree: unknown edge endpoint '" + a + "'");
    if (!known(b)) throw ConfigError("tree: unknown edge endpoint '" + b + "'");
    auto e = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    if (!seen.insert(e).second) {
      throw ConfigError("tree: duplicate edge {" + e.first + "," + e.second +
                        "}");
    }
    canon.push_back(e);
  }
  if (canon.size() + 1 != sorted_nodes.size()) {
    throw ConfigError(canon.size() + 1 > sorted_nodes.size()
                          ? "tree: cycle detected (|E| > |V| - 1)"
                          : "tree: disconnected (|E| < |V| - 1)");
  }

  // With |E| = |V| - 1, connectivity is equivalent to acyclicity; a BFS
  // decides both.
  std::map<NodeId, std::vector<NodeId>> adj;
  for (const auto& [a, b] : canon) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::set<NodeId> visited{sorted_nodes.front()};
  std::deque<NodeId> queue{sorted_nodes.front()};
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (const NodeId& w : adj[v]) {
      if (visited.insert(w).second) queue.push_back(w);
    }
  }
  if (visited.size() != sorted_nodes.size()) {
    throw ConfigError("tree: disconnected");
  }
  std::sort(canon.begin(), canon.end());
  return Tree(std::move(sorted_nodes), std::move(canon));
}

RootedTree root_tree(const Tree& t, const NodeId& u) {
  if (!t.has_node(u)) {
    throw ConfigError("root_tree: unknown root id '" + u + "'");
  }
  RootedTree rt{t, u, {}, {}};
  std::set<NodeId> visited{u};
  std::deque<NodeId> queue{u};
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (const NodeId& w : t.neighbors(v)) {
      if (!visited.insert(w).second) continue;
      rt.directed_edges.emplace_back(v, w);
      rt.parent[w] = v;
      queue.push_back(w);
    }
  }
  return rt;
}

std::vector<DirectedEdge> path(const Tree& t, const NodeId& u,
                               const NodeId& v) {
  if (!t.has_node(u)) throw ConfigError("path: unknown node '" + u + "'");
  if (!t.has_node(v)) throw ConfigError("path: unknown node '" + v + "'");
  if (u == v) {
    throw PreconditionError("path: endpoints coincide (empty path rejected)");
  }
  // Walk both endpoints up to their lowest common ancestor under the
  // canonical root.
  std::vector<NodeId> up_u{u}, up_v{v};
  NodeId a = u, b = v;
  int da = t.depth_.at(a), db = t.depth_.at(b);
  while (da > db) {
    a = t.parent_.at(a);
    up_u.push_back(a);
    --da;
  }
  while (db > da) {
    b = t.parent_.at(b);
    up_v.push_back(b);
    --db;
  }
  while (a != b) {
    a = t.parent_.at(a);
    b = t.parent_.at(b);
    up_u.push_back(a);
    up_v.push_back(b);
  }
  std::vector<DirectedEdge> result;
  for (std::size_t i = 0; i + 1 < up_u.size(); ++i) {
    result.emplace_back(up_u[i], up_u[i + 1]);
  }
  for (std::size_t i = up_v.size(); i-- > 1;) {
    result.emplace_back(up_v[i], up_v[i - 1]);
  }
  return result;
}

}  // namespace tailcalc
