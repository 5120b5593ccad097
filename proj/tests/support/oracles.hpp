#pragma once

// Brute-force oracles and generators used by the test suites. Everything
// here takes independent routes from the library code it checks: tree
// divisibility is decided by cutting edges and flood-filling, graph
// divisibility by bipartition enumeration in the verifier, and the PIF
// replays pump the pure handlers directly.

#include <deque>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "rwc/protocol.hpp"
#include "rwc/topology.hpp"
#include "rwc/word.hpp"

namespace rwc::testing {

// Component of `start` in the tree seen as an undirected graph with the
// edge (cut_child, parent(cut_child)) removed.
inline std::set<NodeId> tree_component(const RootedTree& t, NodeId start,
                                       NodeId cut_child) {
  std::map<NodeId, std::set<NodeId>> adj;
  for (const auto& [child, father] : t.parent) {
    if (child == cut_child) continue;
    adj[child].insert(father);
    adj[father].insert(child);
  }
  std::set<NodeId> seen{start};
  std::deque<NodeId> q{start};
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop_front();
    for (NodeId u : adj[v])
      if (seen.insert(u).second) q.push_back(u);
  }
  return seen;
}

// Independent of subtree-size bookkeeping: try every edge, flood-fill
// both sides, compare sizes.
inline bool brute_force_tree_divisible(const RootedTree& t, int m) {
  const long n = static_cast<long>(t.node_count());
  for (const auto& [child, father] : t.parent) {
    const auto side = tree_component(t, child, child);
    const long k = static_cast<long>(side.size());
    if (k >= m && n - k >= m) return true;
  }
  return false;
}

// The divide contract: both words decode to subtrees of t, they partition
// its identities, w1 keeps the root, and both sides have >= m identities.
inline bool divide_output_valid(const RootedTree& t, int m,
                                const CirculatingWord& w1,
                                const CirculatingWord& w2) {
  if (w1.empty() || w2.empty()) return false;
  if (w1.head() != t.root) return false;
  if (static_cast<long>(nb_identities(w1)) < m) return false;
  if (static_cast<long>(nb_identities(w2)) < m) return false;

  const auto ids1 = identities(w1), ids2 = identities(w2);
  for (NodeId v : ids1)
    if (ids2.count(v)) return false;
  std::set<NodeId> all = ids1;
  all.insert(ids2.begin(), ids2.end());
  if (all != t.nodes()) return false;

  // every decoded edge must be an edge of t, in the same orientation
  for (const auto& w : {w1, w2}) {
    RootedTree part = build_tree(w);
    for (const auto& [child, father] : part.parent) {
      auto it = t.parent.find(child);
      if (it == t.parent.end() || it->second != father) return false;
    }
  }
  // w2's root hangs off the w1 side in t
  auto cut = t.parent.find(build_tree(w2).root);
  if (cut == t.parent.end() || !ids1.count(cut->second)) return false;
  return true;
}

// Random recursive tree over shuffled ids; shape varies with the seed.
inline RootedTree random_tree(std::mt19937_64& rng, int n, NodeId id_base = 1,
                              NodeId id_stride = 1) {
  std::vector<NodeId> ids;
  for (int k = 0; k < n; ++k) ids.push_back(id_base + id_stride * k);
  std::shuffle(ids.begin(), ids.end(), rng);
  RootedTree t;
  t.root = ids[0];
  for (int k = 1; k < n; ++k) {
    NodeId parent = ids[rng() % static_cast<std::uint64_t>(k)];
    t.parent[ids[k]] = parent;
  }
  return t;
}

inline Topology ring(int n, NodeId base = 1) {
  Topology t;
  for (int k = 0; k < n; ++k) t.nodes.insert(base + k);
  for (int k = 0; k < n; ++k) t.add_edge(base + k, base + (k + 1) % n);
  return t;
}

inline Topology complete(int n, NodeId base = 1) {
  Topology t;
  for (int k = 0; k < n; ++k) t.nodes.insert(base + k);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) t.add_edge(base + a, base + b);
  return t;
}

// Random connected graph: a random spanning tree plus extra edges.
inline Topology random_connected_graph(std::mt19937_64& rng, int n,
                                       double extra_edge_prob = 0.2) {
  Topology t;
  for (int k = 1; k <= n; ++k) t.nodes.insert(k);
  for (int k = 2; k <= n; ++k)
    t.add_edge(k, static_cast<NodeId>(1 + rng() % static_cast<std::uint64_t>(k - 1)));
  const std::uint64_t den = 1u << 20;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      if (!t.has_edge(a, b) &&
          rng() % den < static_cast<std::uint64_t>(extra_edge_prob * den))
        t.add_edge(a, b);
  return t;
}

// All spanning trees of a small graph, as RootedTree objects rooted at
// the smallest node. Enumerates edge subsets of size n-1.
inline std::vector<RootedTree> all_spanning_trees(const Topology& g) {
  std::vector<std::pair<NodeId, NodeId>> edges(g.edges.begin(), g.edges.end());
  const std::size_t n = g.nodes.size(), e = edges.size();
  std::vector<RootedTree> out;
  if (n == 0 || e < n - 1) return out;
  std::vector<std::size_t> pick(n - 1);
  // lexicographic combinations
  for (std::size_t k = 0; k < n - 1; ++k) pick[k] = k;
  while (true) {
    Topology sub;
    sub.nodes = g.nodes;
    for (std::size_t k : pick) sub.add_edge(edges[k].first, edges[k].second);
    if (sub.connected()) {
      RootedTree t;
      t.root = *g.nodes.begin();
      std::set<NodeId> seen{t.root};
      std::deque<NodeId> q{t.root};
      while (!q.empty()) {
        NodeId v = q.front();
        q.pop_front();
        for (NodeId u : sub.neighbors(v)) {
          if (seen.insert(u).second) {
            t.parent[u] = v;
            q.push_back(u);
          }
        }
      }
      out.push_back(std::move(t));
    }
    // next combination
    std::size_t k = n - 1;
    while (k-- > 0) {
      if (pick[k] + (n - 1 - k) < e) {
        ++pick[k];
        for (std::size_t j = k + 1; j < n - 1; ++j) pick[j] = pick[j - 1] + 1;
        break;
      }
      if (k == 0) return out;
    }
    if (n == 1) return out;
  }
}

// Synchronous handler pump for protocol replays: delivers queued messages
// one at a time (FIFO by default), with a fixed rule for the random
// neighbor choice (smallest id unless overridden per node).
struct TestNet {
  ProtocolParams params;
  Topology topo;
  std::map<NodeId, NodeState> states;
  struct Env {
    NodeId from, to;
    Message msg;
  };
  std::deque<Env> queue;
  std::vector<Env> sent_log;
  std::map<NodeId, NodeId> forced_choice;

  explicit TestNet(ProtocolParams p, Topology t) : params(p), topo(std::move(t)) {
    for (NodeId v : topo.nodes) states[v] = initial_state(v);
  }

  NodeId choice_for(NodeId v) const {
    auto it = forced_choice.find(v);
    if (it != forced_choice.end()) return it->second;
    auto nbrs = topo.neighbors(v);
    return nbrs.empty() ? v : *nbrs.begin();
  }

  void absorb(NodeId from, HandlerResult&& r) {
    states[from] = std::move(r.state);
    for (auto& s : r.sends) {
      queue.push_back(Env{from, s.to, s.msg});
      sent_log.push_back(Env{from, s.to, std::move(s.msg)});
    }
  }

  void awaken(NodeId v, bool coin) {
    absorb(v, on_awaken(states[v], topo.neighbors(v), params, coin, choice_for(v)));
  }

  // Deliver the front message; returns false when the queue is empty.
  bool deliver_one() {
    if (queue.empty()) return false;
    Env e = std::move(queue.front());
    queue.pop_front();
    const auto nbrs = topo.neighbors(e.to);
    const NodeState& st = states[e.to];
    std::visit(
        [&](const auto& msg) {
          using T = std::decay_t<decltype(msg)>;
          if constexpr (std::is_same_v<T, TokenMsg>) {
            absorb(e.to, on_token(st, nbrs, params, msg, e.from, choice_for(e.to)));
          } else if constexpr (std::is_same_v<T, DissolutionMsg>) {
            absorb(e.to, on_dissolution(st, nbrs, params, msg, e.from));
          } else if constexpr (std::is_same_v<T, FeedbackDissMsg>) {
            absorb(e.to, on_feedback_diss(st, nbrs, params, msg, e.from));
          } else if constexpr (std::is_same_v<T, DivisionMsg>) {
            absorb(e.to, on_division(st, nbrs, params, msg, e.from, choice_for(e.to)));
          } else if constexpr (std::is_same_v<T, FeedbackDivMsg>) {
            absorb(e.to, on_feedback_div(st, nbrs, params, msg, e.from, choice_for(e.to)));
          } else if constexpr (std::is_same_v<T, DeleteMsg>) {
            absorb(e.to, on_delete(st, nbrs, params, msg, e.from));
          } else {
            absorb(e.to, on_token_ack(st, params, msg, e.from));
          }
        },
        e.msg);
    return true;
  }

  std::size_t pump(std::size_t limit = 10000) {
    std::size_t n = 0;
    while (n < limit && deliver_one()) ++n;
    return n;
  }

  // Deliver control messages only, leaving Token messages queued; tokens
  // circulate forever by design, so wave replays stop on their own.
  std::size_t pump_control(std::size_t limit = 10000) {
    std::size_t n = 0;
    while (n < limit) {
      auto it = std::find_if(queue.begin(), queue.end(),
                             [](const Env& e) { return !is_token(e.msg); });
      if (it == queue.end()) return n;
      Env e = std::move(*it);
      queue.erase(it);
      queue.push_front(std::move(e));
      deliver_one();
      ++n;
    }
    return n;
  }

  void link_down(NodeId a, NodeId b) {
    topo.remove_edge(a, b);
    // in-flight messages on the link die with it
    std::deque<Env> keep;
    for (auto& e : queue)
      if (!((e.from == a && e.to == b) || (e.from == b && e.to == a)))
        keep.push_back(std::move(e));
    queue = std::move(keep);
    for (NodeId v : {std::min(a, b), std::max(a, b)}) {
      NodeId lost = v == a ? b : a;
      auto nbrs = topo.neighbors(v);
      std::optional<NodeId> chosen;
      if (!nbrs.empty()) chosen = forced_choice.count(v) ? forced_choice[v] : *nbrs.begin();
      absorb(v, on_link_down(states[v], nbrs, params, lost, chosen));
    }
  }

  std::size_t count_queued_tokens() const {
    std::size_t n = 0;
    for (const auto& e : queue)
      if (is_token(e.msg)) ++n;
    return n;
  }
};

}  // namespace rwc::testing
