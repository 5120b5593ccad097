#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rwc/scenario.hpp"
#include "rwc/snapshot.hpp"

namespace rwc {

// Fixed-point time (integer ticks) and a single RNG stream make the trace
// a pure function of (seed, scenario, config).
struct RunConfig {
  std::uint64_t seed{1};
  int m{1};
  Variant variant{Variant::Static};
  SimTime delay_lo{1}, delay_hi{10};
  SimTime awaken_lo{1}, awaken_hi{10};
  std::uint64_t horizon_events{10000};
  SimTime max_time{std::numeric_limits<SimTime>::max()};
  bool fifo_links{false};
};

// Line-oriented run journal. Each simulator event appears as an `ev` line
// followed by the records it produced (sends, drops, state updates,
// notes), so a replay can maintain the exact between-events configuration.
//
//   rwc-trace 1
//   config m=.. variant=.. seed=.. delay=lo:hi awaken=lo:hi horizon=.. fifo=0|1
//   node <id> / edge <a> <b>
//   begin
//   ev <n> t=<t> awaken node=<v> coin=<0|1> chosen=<v>
//   ev <n> t=<t> deliver id=<mid> from=<a> to=<b> <message>
//   ev <n> t=<t> linkdown a=<a> b=<b>   (likewise linkup / join / leave)
//   send id=<mid> from=<a> to=<b> at=<t> <message>
//   drop id=<mid> from=<a> to=<b> reason=<r> <message>
//   state <v> col=<c> w=<word> father=<f|-> ver=<n> pending=<...|-> waves=<n>
//   note <v> <text>
//   end converged=<0|1> events=<n> t=<t> sent=<n> delivered=<n> dropped=<n>
class TraceWriter {
 public:
  explicit TraceWriter(std::ostream* os) : os_(os) {}

  void header(const RunConfig& cfg, const Topology& topo);
  void event_awaken(std::uint64_t n, SimTime t, NodeId v, bool coin, NodeId chosen);
  void event_deliver(std::uint64_t n, SimTime t, const InFlight& m);
  void event_mobility(std::uint64_t n, SimTime t, const MobilityEvent& e);
  void send(const InFlight& m);
  void drop(const InFlight& m, const std::string& reason);
  void state(const NodeState& s);
  void node_left(NodeId v);
  void note(NodeId v, const std::string& text);
  void snapshot(const ConfigurationSnapshot& snap, std::uint64_t n, SimTime t);
  void footer(bool converged, std::uint64_t events, SimTime t,
              std::uint64_t sent, std::uint64_t delivered, std::uint64_t dropped);

 private:
  std::ostream* os_;
};

std::string state_line(const NodeState& s);

// Parsing (the verify side). parse_* throw std::invalid_argument on
// malformed input.
Color parse_color(const std::string& s);
CirculatingWord parse_word(const std::string& s);
RootedTree parse_tree(const std::string& s);
Message parse_message(const std::string& s);

struct TraceLine {
  enum class Kind {
    Config, Node, Edge, Begin, Event, Send, Drop, State, NodeLeft, Note,
    Snapshot, End
  };
  Kind kind{};
  int line{};  // 1-based source line

  // config
  RunConfig config;
  // node/edge/state/note
  NodeId a{}, b{};
  // event
  std::uint64_t ev_index{};
  SimTime t{};
  std::string ev_kind;           // awaken|deliver|linkdown|linkup|join|leave
  std::vector<NodeId> join_nbrs;
  bool coin{};
  NodeId chosen{};
  // send/drop/deliver
  std::uint64_t msg_id{};
  SimTime deliver_at{};
  std::optional<Message> msg;
  std::string reason;
  // state
  NodeColor col;
  CirculatingWord word;
  std::optional<NodeId> father;
  std::size_t waves_count{};
  // note / unparsed remainder
  std::string text;
  // end
  bool converged{};
  std::uint64_t events{}, sent{}, delivered{}, dropped{};
};

// Reads one trace from the stream. Throws ScenarioError (with the line
// number) on malformed records.
std::vector<TraceLine> parse_trace(std::istream& in);

}  // namespace rwc
