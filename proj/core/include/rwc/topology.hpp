#pragma once

#include <set>
#include <utility>

#include "rwc/word.hpp"

namespace rwc {

// Undirected graph; edges stored with the smaller endpoint first.
struct Topology {
  std::set<NodeId> nodes;
  std::set<std::pair<NodeId, NodeId>> edges;

  static std::pair<NodeId, NodeId> key(NodeId a, NodeId b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }

  bool has_node(NodeId v) const { return nodes.count(v) != 0; }
  bool has_edge(NodeId a, NodeId b) const { return edges.count(key(a, b)) != 0; }
  void add_edge(NodeId a, NodeId b) { edges.insert(key(a, b)); }
  void remove_edge(NodeId a, NodeId b) { edges.erase(key(a, b)); }

  std::set<NodeId> neighbors(NodeId v) const;

  // Connectivity of the whole graph, or of an induced subset.
  bool connected() const;
  bool connected_subset(const std::set<NodeId>& subset) const;

  bool operator==(const Topology&) const = default;
};

}  // namespace rwc
