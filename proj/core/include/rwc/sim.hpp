#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "rwc/rng.hpp"
#include "rwc/scenario.hpp"
#include "rwc/snapshot.hpp"
#include "rwc/trace.hpp"

namespace rwc {

// Sequential discrete-event loop. Events are ordered by (time, insertion
// sequence); every random choice (delays, awaken times, coins, neighbor
// picks) comes from one seeded stream, so a run is a pure function of
// (scenario, config). Message delays are independent per message, i.e.
// links are not FIFO unless config.fifo_links is set.
class Simulator {
 public:
  Simulator(Scenario scenario, RunConfig config, TraceWriter* trace = nullptr);

  // Process the next event. Returns false once the horizon is reached,
  // the time cap would be exceeded, or nothing is left to do.
  bool step();

  const ConfigurationSnapshot& snapshot() const { return snap_; }
  const ProtocolParams& params() const { return params_; }
  const RunConfig& config() const { return cfg_; }

  SimTime now() const { return now_; }
  std::uint64_t events() const { return events_; }
  bool horizon_reached() const { return events_ >= cfg_.horizon_events; }
  bool queue_empty() const { return queue_.empty(); }
  bool mobility_pending() const { return mobility_left_ > 0; }

  std::uint64_t sent() const { return sent_; }
  std::uint64_t delivered() const { return delivered_; }
  std::uint64_t dropped() const { return dropped_; }

  // Schedule an extra topology change (used by recovery experiments).
  void inject_link_down(SimTime at, NodeId a, NodeId b);

  void write_footer(bool converged);

 private:
  enum class Ev { Deliver, Awaken, Mobility };
  struct QEntry {
    SimTime t;
    std::uint64_t seq;
    Ev kind;
    std::uint64_t msg_id;   // Deliver
    NodeId node;            // Awaken
    std::size_t mob_index;  // Mobility
    bool operator>(const QEntry& o) const {
      return t != o.t ? t > o.t : seq > o.seq;
    }
  };

  bool alive(NodeId v) const { return snap_.states.count(v) != 0; }
  void push(QEntry e);
  void schedule_awaken(NodeId v);
  void enqueue_send(NodeId from, NodeId to, Message msg);
  void apply(NodeId node, HandlerResult&& r);
  void drop_link_messages(NodeId a, NodeId b, const std::string& reason);
  void drop_node_messages(NodeId v, const std::string& reason);
  void do_deliver(const InFlight& m);
  void do_awaken(NodeId v);
  void do_mobility(const MobilityEvent& e);
  std::optional<NodeId> pick_neighbor(NodeId v);

  ProtocolParams params_;
  RunConfig cfg_;
  TraceWriter* trace_;
  Rng rng_;

  ConfigurationSnapshot snap_;
  std::priority_queue<QEntry, std::vector<QEntry>, std::greater<QEntry>> queue_;
  std::vector<MobilityEvent> mobility_;
  std::size_t mobility_left_{0};
  std::map<NodeId, bool> awaken_scheduled_;
  std::map<std::pair<NodeId, NodeId>, SimTime> fifo_last_;

  SimTime now_{0};
  std::uint64_t seq_{0};
  std::uint64_t next_msg_id_{0};
  std::uint64_t events_{0};
  std::uint64_t sent_{0}, delivered_{0}, dropped_{0};
};

}  // namespace rwc
