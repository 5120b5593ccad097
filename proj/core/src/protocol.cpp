#include "rwc/protocol.hpp"

#include <algorithm>
#include <sstream>

namespace rwc {

std::string to_string(Variant v) {
  return v == Variant::Static ? "static" : "mobile";
}

std::string to_string(const NodeColor& c) {
  switch (c.tag) {
    case NodeColor::Tag::Free: return "free";
    case NodeColor::Tag::Locked: return "locked";
    default: return to_string(c.color);
  }
}

std::string to_string(const Message& m) {
  std::ostringstream os;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TokenMsg>) {
          os << "token col=" << to_string(v.col) << " w=" << to_string(v.w);
        } else if constexpr (std::is_same_v<T, DissolutionMsg>) {
          os << "diss tree=" << to_string(v.tree);
        } else if constexpr (std::is_same_v<T, FeedbackDissMsg>) {
          os << "fbdiss tree=" << to_string(v.tree);
        } else if constexpr (std::is_same_v<T, DivisionMsg>) {
          os << "div tree=" << to_string(v.tree) << " c1=" << to_string(v.col1)
             << " w1=" << to_string(v.w1) << " c2=" << to_string(v.col2)
             << " w2=" << to_string(v.w2);
        } else if constexpr (std::is_same_v<T, FeedbackDivMsg>) {
          os << "fbdiv tree=" << to_string(v.tree) << " c1=" << to_string(v.col1)
             << " w1=" << to_string(v.w1) << " c2=" << to_string(v.col2)
             << " w2=" << to_string(v.w2);
        } else if constexpr (std::is_same_v<T, DeleteMsg>) {
          os << "delete col=" << to_string(v.col);
        } else {
          os << "ack col=" << to_string(v.col);
        }
      },
      m);
  return os.str();
}

bool is_token(const Message& m) { return std::holds_alternative<TokenMsg>(m); }

NodeState initial_state(NodeId id) {
  NodeState s;
  s.id = id;
  return s;
}

namespace {

bool mobile(const ProtocolParams& p) { return p.variant == Variant::Mobile; }

// A destination is sendable if it is a live neighbor or the node itself
// (self-sends model a token circulating on an isolated node).
bool sendable(const NodeState& s, const std::set<NodeId>& nbrs, NodeId to) {
  return to == s.id || nbrs.count(to) != 0;
}

void send_or_note(HandlerResult& r, const std::set<NodeId>& nbrs, NodeId to,
                  Message msg) {
  if (sendable(r.state, nbrs, to)) {
    r.sends.push_back({to, std::move(msg)});
  } else {
    r.notes.push_back("dropped send to unreachable " + std::to_string(to));
  }
}

std::vector<NodeId> reachable_sons(const RootedTree& tree, NodeId id,
                                   const std::set<NodeId>& nbrs) {
  std::vector<NodeId> out;
  for (NodeId son : tree.sons(id))
    if (nbrs.count(son)) out.push_back(son);
  return out;
}

std::optional<std::size_t> find_wave(const NodeState& s, bool division,
                                     const RootedTree& tree) {
  for (std::size_t k = 0; k < s.waves.size(); ++k)
    if (s.waves[k].division == division && s.waves[k].tree == tree) return k;
  return std::nullopt;
}

void mint_token(HandlerResult& r, const std::set<NodeId>& nbrs,
                const ProtocolParams& p, const Color& col,
                const CirculatingWord& w, std::optional<NodeId> chosen) {
  NodeState& st = r.state;
  if (!chosen) {
    r.notes.push_back("token lost: no neighbor to send to");
    return;
  }
  TokenMsg tok{col, w};
  if (mobile(p)) {
    st.pending = PendingToken{*chosen, tok};
    if (st.col.is(col)) st.father = *chosen;
  }
  send_or_note(r, nbrs, *chosen, std::move(tok));
}

// Completion check for the wave at index k. Runs the role-specific action
// when enough feedback arrived (counted against the sons of the wave tree
// that are still reachable) and removes the record.
void complete_wave_if_done(HandlerResult& r, const std::set<NodeId>& nbrs,
                           const ProtocolParams& p, std::size_t k,
                           std::optional<NodeId> chosen) {
  NodeState& st = r.state;
  WaveRecord& w = st.waves[k];
  const int expected =
      static_cast<int>(reachable_sons(w.tree, st.id, nbrs).size());
  if (w.received < expected) return;

  const WaveRecord done = w;  // the record is dropped before any sends
  st.waves.erase(st.waves.begin() + static_cast<std::ptrdiff_t>(k));

  const auto up = done.tree.father(st.id);
  if (!done.division) {
    if (up) send_or_note(r, nbrs, *up, FeedbackDissMsg{done.tree});
    if (done.participant && st.col.is_locked()) {
      st.col = NodeColor::free();
      st.father.reset();
    }
    return;
  }

  if (st.id == done.w1.head()) {
    // the dividing node, root of the wave tree: revive the first token
    if (done.participant) mint_token(r, nbrs, p, done.col1, done.w1, chosen);
  } else if (st.id == done.w2.head() && done.participant) {
    // root of the detached side: its subtree is done, so its token can be
    // created now; the feedback still flows up so the wave terminates
    mint_token(r, nbrs, p, done.col2, done.w2, chosen);
    if (up)
      send_or_note(r, nbrs, *up,
                   FeedbackDivMsg{done.tree, done.col1, done.w1, done.col2, done.w2});
  } else {
    if (up)
      send_or_note(r, nbrs, *up,
                   FeedbackDivMsg{done.tree, done.col1, done.w1, done.col2, done.w2});
  }
}

}  // namespace

HandlerResult on_awaken(NodeState s, const std::set<NodeId>& neighbors,
                        const ProtocolParams& p, bool coin, NodeId chosen) {
  HandlerResult r{std::move(s), {}, {}};
  NodeState& st = r.state;
  if (!st.col.is_free() || !coin) return r;

  Color c{st.id, 0};
  if (mobile(p)) c.version = st.version++;
  st.col = NodeColor::of(c);
  st.word = CirculatingWord{{st.id}};
  mint_token(r, neighbors, p, c, st.word, chosen);
  return r;
}

HandlerResult on_token(NodeState s, const std::set<NodeId>& neighbors,
                       const ProtocolParams& p, TokenMsg msg, NodeId from,
                       NodeId chosen) {
  HandlerResult r{std::move(s), {}, {}};
  NodeState& st = r.state;
  if (msg.w.empty()) {
    r.notes.push_back("fault: malformed token (empty word), dropped");
    return r;
  }

  if (mobile(p)) {
    // Repair first: sons this node supposedly has but is no longer linked
    // to are cut out of the carried tree before anything else looks at it.
    RootedTree a = build_tree(msg.w);
    bool pruned = false;
    if (a.contains(st.id)) {
      for (NodeId son : a.sons(st.id)) {
        if (!neighbors.count(son)) {
          a = remove_subtree(a, son);
          pruned = true;
        }
      }
      // A node that meanwhile belongs elsewhere (or is locked) is stale
      // data in this word; it cuts itself out the same way. Without this
      // the word keeps claiming ex-members forever: their entries sit on
      // live links, so the neighborhood check above never fires.
      if (!st.col.is_free() && !st.col.is(msg.col) && st.id != a.root &&
          a.contains(st.id)) {
        a = remove_subtree(a, st.id);
        pruned = true;
      }
    }
    if (pruned) msg.w = tree_to_word(a);
  }

  const bool fresh_forward = (from == msg.w.head() && from != st.id);

  if (st.col.is_free() || st.col.is(msg.col)) {
    // Case 1: recruit or continue. The cluster's token is in hand, so any
    // outstanding send of ours is resolved.
    st.pending.reset();
    if (mobile(p) && fresh_forward)
      r.sends.push_back({from, TokenAckMsg{msg.col}});

    CirculatingWord w = clean_word(st.id, neighbors, add_begin(st.id, msg.w));
    RootedTree a = build_tree(w);
    if (is_divisible(a, p.m)) {
      Division div = divide(a, p.m);
      Color c1{st.id, 0}, c2{div.w2.head(), 0};
      if (mobile(p)) {
        c1.version = st.version++;
        c2.version = st.version++;
      }
      st.col = NodeColor::of(c1);
      st.word = div.w1;
      const auto sons = reachable_sons(a, st.id, neighbors);
      if (sons.empty()) {
        // cannot happen for words the protocol builds; keep the token alive
        r.notes.push_back("fault: division with no reachable son");
        mint_token(r, neighbors, p, c1, div.w1, chosen);
        return r;
      }
      for (NodeId son : sons)
        r.sends.push_back({son, DivisionMsg{a, c1, div.w1, c2, div.w2}});
      st.waves.push_back(WaveRecord{true, a, c1, c2, div.w1, div.w2, 0, true});
    } else {
      st.col = NodeColor::of(msg.col);
      st.word = w;
      mint_token(r, neighbors, p, msg.col, w, chosen);
    }
    return r;
  }

  // Reflections aim at w[1] (the last forwarder); if that link is gone
  // (a regenerated token carries a stale head) the physical sender takes
  // its place, so the cluster's only token is never silently dropped.
  const NodeId reflect_to =
      sendable(st, neighbors, msg.w.head()) ? msg.w.head() : from;

  if (st.col.is_locked()) {
    send_or_note(r, neighbors, reflect_to, TokenMsg{msg});
    return r;
  }

  // Case 2: member of another cluster. Dissolve the token's cluster when
  // it is too small, the asymmetry test allows it, and the dissolution
  // can actually reach the tree root; bounce otherwise.
  if (static_cast<int>(nb_identities(msg.w)) < p.m &&
      (static_cast<int>(nb_identities(st.word)) >= p.m ||
       st.col.color > msg.col) &&
      sendable(st, neighbors, msg.w.head())) {
    RootedTree a = build_tree(msg.w);
    send_or_note(r, neighbors, msg.w.head(), DissolutionMsg{a});
    if (mobile(p) && fresh_forward)
      r.sends.push_back({from, TokenAckMsg{msg.col}});
  } else {
    send_or_note(r, neighbors, reflect_to, TokenMsg{msg});
  }
  return r;
}

HandlerResult on_dissolution(NodeState s, const std::set<NodeId>& neighbors,
                             const ProtocolParams& p, DissolutionMsg msg,
                             NodeId from) {
  HandlerResult r{std::move(s), {}, {}};
  NodeState& st = r.state;
  if (!msg.tree.contains(st.id)) {
    r.notes.push_back("fault: dissolution for a tree not containing this node");
    return r;
  }
  if (find_wave(st, false, msg.tree)) {
    r.notes.push_back("fault: duplicate dissolution wave ignored");
    return r;
  }

  const bool participant =
      !mobile(p) || (st.father.has_value() && *st.father == from);
  if (participant) {
    st.col = NodeColor::locked();
    st.word = CirculatingWord{};
    st.pending.reset();
  }

  for (NodeId son : reachable_sons(msg.tree, st.id, neighbors))
    r.sends.push_back({son, DissolutionMsg{msg.tree}});
  st.waves.push_back(WaveRecord{false, msg.tree, {}, {}, {}, {}, 0, participant});
  complete_wave_if_done(r, neighbors, p, st.waves.size() - 1, std::nullopt);
  return r;
}

HandlerResult on_feedback_diss(NodeState s, const std::set<NodeId>& neighbors,
                               const ProtocolParams& p, FeedbackDissMsg msg,
                               NodeId from) {
  HandlerResult r{std::move(s), {}, {}};
  NodeState& st = r.state;
  (void)from;
  auto k = find_wave(st, false, msg.tree);
  if (!k) {
    r.notes.push_back("fault: feedback for an unknown dissolution wave");
    return r;
  }
  st.waves[*k].received++;
  complete_wave_if_done(r, neighbors, p, *k, std::nullopt);
  return r;
}

HandlerResult on_division(NodeState s, const std::set<NodeId>& neighbors,
                          const ProtocolParams& p, DivisionMsg msg, NodeId from,
                          NodeId chosen) {
  HandlerResult r{std::move(s), {}, {}};
  NodeState& st = r.state;
  if (!msg.tree.contains(st.id)) {
    r.notes.push_back("fault: division for a tree not containing this node");
    return r;
  }
  if (find_wave(st, true, msg.tree)) {
    r.notes.push_back("fault: duplicate division wave ignored");
    return r;
  }

  bool participant =
      !mobile(p) || (st.father.has_value() && *st.father == from);
  if (participant) {
    if (contains(msg.w1, st.id)) {
      st.word = msg.w1;
      st.col = NodeColor::of(msg.col1);
    } else if (contains(msg.w2, st.id)) {
      st.word = msg.w2;
      st.col = NodeColor::of(msg.col2);
    } else {
      r.notes.push_back("fault: division names this node in neither side");
      participant = false;
    }
    if (participant) {
      st.pending.reset();
      if (mobile(p) && msg.col2.creator == st.id)
        st.version = std::max(st.version, msg.col2.version + 1);
    }
  }

  for (NodeId son : reachable_sons(msg.tree, st.id, neighbors))
    r.sends.push_back({son, msg});
  st.waves.push_back(WaveRecord{true, msg.tree, msg.col1, msg.col2, msg.w1,
                                msg.w2, 0, participant});
  complete_wave_if_done(r, neighbors, p, st.waves.size() - 1, chosen);
  return r;
}

HandlerResult on_feedback_div(NodeState s, const std::set<NodeId>& neighbors,
                              const ProtocolParams& p, FeedbackDivMsg msg,
                              NodeId from, NodeId chosen) {
  HandlerResult r{std::move(s), {}, {}};
  NodeState& st = r.state;
  (void)from;
  auto k = find_wave(st, true, msg.tree);
  if (!k) {
    r.notes.push_back("fault: feedback for an unknown division wave");
    return r;
  }
  st.waves[*k].received++;
  complete_wave_if_done(r, neighbors, p, *k, chosen);
  return r;
}

HandlerResult on_delete(NodeState s, const std::set<NodeId>& neighbors,
                        const ProtocolParams& p, DeleteMsg msg, NodeId from) {
  HandlerResult r{std::move(s), {}, {}};
  NodeState& st = r.state;
  if (!mobile(p)) return r;
  if (!st.father || *st.father != from) return r;
  if (!st.col.is(msg.col)) return r;  // not a descendant in that cluster's tree
  st.col = NodeColor::free();
  st.father.reset();
  for (NodeId n : neighbors) r.sends.push_back({n, msg});
  return r;
}

HandlerResult on_token_ack(NodeState s, const ProtocolParams&, TokenAckMsg msg,
                           NodeId from) {
  HandlerResult r{std::move(s), {}, {}};
  NodeState& st = r.state;
  if (st.pending && st.pending->neighbor == from &&
      st.pending->token.col == msg.col) {
    st.pending.reset();
  }
  return r;
}

HandlerResult on_link_down(NodeState s, const std::set<NodeId>& neighbors,
                           const ProtocolParams& p, NodeId lost,
                           std::optional<NodeId> chosen) {
  HandlerResult r{std::move(s), {}, {}};
  NodeState& st = r.state;
  if (!mobile(p)) return r;

  // Waves first: a vanished son may have been the last feedback owed.
  for (std::size_t k = st.waves.size(); k-- > 0;) {
    if (st.waves[k].tree.contains(st.id) &&
        st.waves[k].tree.contains(lost) &&
        st.waves[k].tree.father(lost) == std::optional<NodeId>(st.id)) {
      complete_wave_if_done(r, neighbors, p, k, chosen);
    }
  }

  const bool father_lost = st.father && *st.father == lost;
  const bool pending_lost = st.pending && st.pending->neighbor == lost;

  if (pending_lost) {
    // Unresolved forward: (id, lost) was the token's flight edge, not a
    // tree edge, so the tree rooted here is intact. Replay the token
    // verbatim and keep the cluster; no subtree hangs below that link.
    TokenMsg tok = st.pending->token;
    st.pending.reset();
    if (father_lost) st.father.reset();
    mint_token(r, neighbors, p, tok.col, tok.w, chosen);
    r.notes.push_back("token regenerated after link loss");
  } else if (father_lost) {
    // The forward toward `lost` was acknowledged long ago: (id, lost) is
    // a real edge of the cluster tree, and everything below it hangs off
    // a dead link. Leave the cluster and flood the subtree.
    const NodeColor old = st.col;
    st.col = NodeColor::free();
    st.father.reset();
    if (old.is_clustered())
      for (NodeId n : neighbors) r.sends.push_back({n, DeleteMsg{old.color}});
  }
  return r;
}

}  // namespace rwc
