#include "rwc/topology.hpp"

#include <vector>

namespace rwc {

std::set<NodeId> Topology::neighbors(NodeId v) const {
  std::set<NodeId> out;
  for (const auto& [a, b] : edges) {
    if (a == v) out.insert(b);
    if (b == v) out.insert(a);
  }
  return out;
}

bool Topology::connected() const { return connected_subset(nodes); }

bool Topology::connected_subset(const std::set<NodeId>& subset) const {
  if (subset.empty()) return true;
  std::set<NodeId> seen{*subset.begin()};
  std::vector<NodeId> stack{*subset.begin()};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId u : neighbors(v)) {
      if (subset.count(u) && !seen.count(u)) {
        seen.insert(u);
        stack.push_back(u);
      }
    }
  }
  return seen.size() == subset.size();
}

}  // namespace rwc
