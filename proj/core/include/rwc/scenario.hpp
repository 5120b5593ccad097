#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rwc/protocol.hpp"
#include "rwc/topology.hpp"

namespace rwc {

using SimTime = std::int64_t;

struct ScenarioError : std::runtime_error {
  int line;
  ScenarioError(int line_, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what),
        line(line_) {}
};

struct MobilityEvent {
  enum class Kind { LinkDown, LinkUp, Join, Leave };
  SimTime at{};
  Kind kind{};
  NodeId a{};                  // LinkDown/LinkUp: first endpoint; Join/Leave: the node
  NodeId b{};                  // LinkDown/LinkUp: second endpoint
  std::vector<NodeId> nbrs;    // Join: initial neighbor list
};

std::string to_string(MobilityEvent::Kind k);

// One run's input: parameters from the header line, the initial graph,
// and a scripted mobility schedule.
//
// File grammar (one item per line, '#' starts a comment):
//   m=<int> variant=<static|mobile> seed=<u64>
//   node <id>
//   edge <a> <b>
//   at <time> linkdown <a> <b>
//   at <time> linkup <a> <b>
//   at <time> join <id> <neighbor>...
//   at <time> leave <id>
struct Scenario {
  int m{1};
  Variant variant{Variant::Static};
  std::uint64_t seed{1};
  Topology topo;
  std::vector<MobilityEvent> mobility;  // ordered by (at, file order)
};

Scenario parse_scenario(std::istream& in);
Scenario parse_scenario_file(const std::string& path);

// Checks the spec preconditions: at least m nodes, connected initial
// graph, edges between declared nodes, no self loops, and a mobility
// script that stays coherent when replayed over the topology (no removal
// of absent links, no joining an existing id, ...). The static variant
// rejects linkdown/leave since it has no repair path. Throws ScenarioError.
void validate_scenario(const Scenario& sc);

}  // namespace rwc
