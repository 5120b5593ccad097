#pragma once

#include <cstdint>
#include <map>

#include "rwc/protocol.hpp"
#include "rwc/scenario.hpp"
#include "rwc/topology.hpp"

namespace rwc {

struct InFlight {
  std::uint64_t id{};  // send order, unique per run
  NodeId from{};
  NodeId to{};
  Message msg;
  SimTime sent_at{};
  SimTime deliver_at{};
};

// The system state between two events: node states, messages in flight,
// and the live topology. Everything the configuration predicates need.
struct ConfigurationSnapshot {
  std::map<NodeId, NodeState> states;
  std::map<std::uint64_t, InFlight> in_flight;  // keyed by send id
  Topology topo;
};

}  // namespace rwc
