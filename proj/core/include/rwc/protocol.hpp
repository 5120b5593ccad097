#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rwc/word.hpp"

namespace rwc {

enum class Variant { Static, Mobile };

std::string to_string(Variant v);

struct ProtocolParams {
  Variant variant{Variant::Static};
  int m{1};
};

// col_i: free, locked (the transient dissolution state), or a cluster color.
struct NodeColor {
  enum class Tag : std::uint8_t { Free, Locked, Clustered };
  Tag tag{Tag::Free};
  Color color{};  // meaningful only when Clustered

  static NodeColor free() { return {}; }
  static NodeColor locked() { return {Tag::Locked, {}}; }
  static NodeColor of(Color c) { return {Tag::Clustered, c}; }

  bool is_free() const { return tag == Tag::Free; }
  bool is_locked() const { return tag == Tag::Locked; }
  bool is_clustered() const { return tag == Tag::Clustered; }
  bool is(const Color& c) const { return is_clustered() && color == c; }

  bool operator==(const NodeColor&) const = default;
};

std::string to_string(const NodeColor& c);

// ---- wire messages ------------------------------------------------------

struct TokenMsg {
  Color col;
  CirculatingWord w;  // non-empty; w.head() is the last node that wrote it
  bool operator==(const TokenMsg&) const = default;
};

struct DissolutionMsg {
  RootedTree tree;
  bool operator==(const DissolutionMsg&) const = default;
};

struct FeedbackDissMsg {
  RootedTree tree;
  bool operator==(const FeedbackDissMsg&) const = default;
};

// Division carries the two successor colors explicitly: receivers cannot
// reconstruct version numbers from w1[1]/w2[1] alone.
struct DivisionMsg {
  RootedTree tree;  // spanning tree of the whole cluster; the PIF runs on it
  Color col1;
  CirculatingWord w1;
  Color col2;
  CirculatingWord w2;
  bool operator==(const DivisionMsg&) const = default;
};

struct FeedbackDivMsg {
  RootedTree tree;
  Color col1;
  CirculatingWord w1;
  Color col2;
  CirculatingWord w2;
  bool operator==(const FeedbackDivMsg&) const = default;
};

// Carries the dying subtree's cluster color: only same-colored sons are
// descendants in that cluster's tree. A bare wave would leak across
// cluster borders through a root whose father pointer aims at its
// token's flight destination rather than a tree edge.
struct DeleteMsg {
  Color col;
  bool operator==(const DeleteMsg&) const = default;
};

// Sent by a node that keeps a token instead of bouncing it (it joined,
// divided, or consumed the token via dissolution), so the forwarder can
// retire its regeneration record.
struct TokenAckMsg {
  Color col;
  bool operator==(const TokenAckMsg&) const = default;
};

using Message = std::variant<TokenMsg, DissolutionMsg, FeedbackDissMsg,
                             DivisionMsg, FeedbackDivMsg, DeleteMsg, TokenAckMsg>;

std::string to_string(const Message& m);
bool is_token(const Message& m);

// ---- per-node state ------------------------------------------------------

// Last token this node sent that may still bounce back or die with its
// link. Cleared by the returned token, a TokenAck, or the wave that ends
// the cluster; a link loss toward `neighbor` replays `token`.
struct PendingToken {
  NodeId neighbor{};
  TokenMsg token;
  bool operator==(const PendingToken&) const = default;
};

// Bookkeeping for one PIF wave this node forwarded. The expected feedback
// count is not stored: it is recomputed as |sons(tree) ∩ current neighbors|
// every time it is consulted, which is exactly the reachable-sons recheck
// needed when a son link disappears mid-wave.
struct WaveRecord {
  bool division{false};
  RootedTree tree;
  Color col1{}, col2{};        // division only
  CirculatingWord w1, w2;      // division only
  int received{0};
  bool participant{false};     // joined/locked, as opposed to relaying only
  bool operator==(const WaveRecord&) const = default;
};

struct NodeState {
  NodeId id{};
  NodeColor col{};
  CirculatingWord word;                 // w_i, saved copy
  std::optional<NodeId> father;         // mobile variant
  std::uint32_t version{0};             // mobile variant
  std::optional<PendingToken> pending;  // mobile variant
  std::vector<WaveRecord> waves;

  bool operator==(const NodeState&) const = default;
};

NodeState initial_state(NodeId id);

struct Send {
  NodeId to{};
  Message msg;
};

// Pure transition result: the successor state, messages to emit (every
// destination is a current neighbor or the node itself), and free-text
// notes for the trace ("fault: ..." marks protocol-level faults).
struct HandlerResult {
  NodeState state;
  std::vector<Send> sends;
  std::vector<std::string> notes;
};

// Handlers. Randomness is injected: `coin` and `chosen` come from the
// simulator's seeded RNG. `chosen` may equal the node's own id when it
// has no neighbors (the send then loops back to the node).
HandlerResult on_awaken(NodeState s, const std::set<NodeId>& neighbors,
                        const ProtocolParams& p, bool coin, NodeId chosen);

HandlerResult on_token(NodeState s, const std::set<NodeId>& neighbors,
                       const ProtocolParams& p, TokenMsg msg, NodeId from,
                       NodeId chosen);

HandlerResult on_dissolution(NodeState s, const std::set<NodeId>& neighbors,
                             const ProtocolParams& p, DissolutionMsg msg,
                             NodeId from);

HandlerResult on_feedback_diss(NodeState s, const std::set<NodeId>& neighbors,
                               const ProtocolParams& p, FeedbackDissMsg msg,
                               NodeId from);

HandlerResult on_division(NodeState s, const std::set<NodeId>& neighbors,
                          const ProtocolParams& p, DivisionMsg msg, NodeId from,
                          NodeId chosen);

HandlerResult on_feedback_div(NodeState s, const std::set<NodeId>& neighbors,
                              const ProtocolParams& p, FeedbackDivMsg msg,
                              NodeId from, NodeId chosen);

HandlerResult on_delete(NodeState s, const std::set<NodeId>& neighbors,
                        const ProtocolParams& p, DeleteMsg msg, NodeId from);

HandlerResult on_token_ack(NodeState s, const ProtocolParams& p,
                           TokenAckMsg msg, NodeId from);

// Invoked after the link to `lost` is gone; `neighbors` is the surviving
// set and `chosen` a surviving neighbor (if any) for token regeneration.
HandlerResult on_link_down(NodeState s, const std::set<NodeId>& neighbors,
                           const ProtocolParams& p, NodeId lost,
                           std::optional<NodeId> chosen);

}  // namespace rwc
