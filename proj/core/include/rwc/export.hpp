#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rwc/snapshot.hpp"

namespace rwc {

// Final clustering in exchange form: one block per cluster with the
// token's position (the link it is traveling on), plus the leftover free
// and locked nodes. emit/parse round-trip losslessly.
//
//   rwc-clustering 1
//   m=3 variant=static
//   cluster col=(5,0) nodes=<5,7,9> token=3>5
//   free nodes=<1,2>
//   locked nodes=<>
//   end
struct ClusterExport {
  Color col;
  std::set<NodeId> nodes;
  std::optional<std::pair<NodeId, NodeId>> token;  // from > to

  bool operator==(const ClusterExport&) const = default;
};

struct ExportedClustering {
  int m{1};
  Variant variant{Variant::Static};
  std::vector<ClusterExport> clusters;  // ordered by color
  std::set<NodeId> free_nodes;
  std::set<NodeId> locked_nodes;

  bool operator==(const ExportedClustering&) const = default;
};

ExportedClustering make_clustering(const ConfigurationSnapshot& snap, int m,
                                   Variant variant);
std::string emit_clustering(const ExportedClustering& ec);
ExportedClustering parse_clustering(std::istream& in);

// Graphviz rendering: one subgraph block per cluster, token position in
// the cluster label. One-way (for inspection).
std::string emit_dot(const ExportedClustering& ec, const Topology& topo);

}  // namespace rwc
