#include "rwc/verifier.hpp"

#include <algorithm>
#include <sstream>

namespace rwc {

namespace {

std::string node_list(const std::set<NodeId>& s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (NodeId v : s) {
    if (!first) os << ',';
    first = false;
    os << v;
  }
  os << '}';
  return os.str();
}

}  // namespace

std::map<Color, std::set<NodeId>> clusters(const ConfigurationSnapshot& snap) {
  std::map<Color, std::set<NodeId>> out;
  for (const auto& [v, s] : snap.states)
    if (s.col.is_clustered()) out[s.col.color].insert(v);
  return out;
}

std::set<NodeId> neighborhood(const Topology& topo, const std::set<NodeId>& vc) {
  std::set<NodeId> out = vc;
  for (NodeId v : vc)
    for (NodeId u : topo.neighbors(v)) out.insert(u);
  return out;
}

bool divisibility_oracle(const std::set<NodeId>& cluster, const Topology& topo,
                         int m, std::size_t cap) {
  if (cluster.size() > cap)
    throw std::invalid_argument("divisibility_oracle: set exceeds the cap");
  if (!topo.connected_subset(cluster))
    throw std::invalid_argument("divisibility_oracle: set is not connected");
  const auto n = cluster.size();
  if (static_cast<long>(n) < 2L * m) return false;

  std::vector<NodeId> v(cluster.begin(), cluster.end());
  // first element fixed to one side; enumerate the rest
  const std::size_t bits = n - 1;
  for (std::uint64_t mask = 0; mask < (1ULL << bits); ++mask) {
    std::set<NodeId> part1{v[0]}, part2;
    for (std::size_t k = 0; k < bits; ++k)
      (mask >> k & 1 ? part1 : part2).insert(v[k + 1]);
    if (static_cast<long>(part1.size()) < m) continue;
    if (static_cast<long>(part2.size()) < m) continue;
    if (topo.connected_subset(part1) && topo.connected_subset(part2)) return true;
  }
  return false;
}

namespace {

struct TokenInfo {
  const InFlight* inflight;
};

std::map<Color, std::vector<const InFlight*>> live_tokens(
    const ConfigurationSnapshot& snap) {
  std::map<Color, std::vector<const InFlight*>> out;
  for (const auto& [id, m] : snap.in_flight)
    if (const auto* tok = std::get_if<TokenMsg>(&m.msg))
      out[tok->col].push_back(&m);
  return out;
}

}  // namespace

Report is_legitimate(const ConfigurationSnapshot& snap, int m) {
  for (const auto& [v, s] : snap.states)
    if (!s.col.is_clustered())
      return {false, "total-coloring",
              "node " + std::to_string(v) + " is " + to_string(s.col)};

  const auto cl = clusters(snap);
  for (const auto& [c, vc] : cl) {
    if (!snap.topo.connected_subset(vc))
      return {false, "connectivity",
              "cluster " + to_string(c) + " = " + node_list(vc)};
    if (static_cast<long>(vc.size()) < m)
      return {false, "size", "cluster " + to_string(c) + " has " +
                                 std::to_string(vc.size()) + " nodes"};
  }
  for (const auto& [c, vc] : cl)
    if (divisibility_oracle(vc, snap.topo, m))
      return {false, "divisible", "cluster " + to_string(c) + " = " + node_list(vc)};

  const auto toks = live_tokens(snap);
  for (const auto& [c, list] : toks)
    if (!cl.count(c))
      return {false, "token", "token of color " + to_string(c) + " has no cluster"};
  for (const auto& [c, vc] : cl) {
    auto it = toks.find(c);
    const std::size_t count = it == toks.end() ? 0 : it->second.size();
    if (count != 1)
      return {false, "token", "cluster " + to_string(c) + " has " +
                                  std::to_string(count) + " tokens"};
    const auto region = neighborhood(snap.topo, vc);
    if (!region.count(it->second[0]->to))
      return {false, "token", "token of " + to_string(c) + " outside N(V_c)"};
  }

  for (const auto& [id, msg] : snap.in_flight)
    if (!is_token(msg.msg))
      return {false, "messages", "non-token in flight: " + to_string(msg.msg)};
  return {};
}

Report is_correct(const ConfigurationSnapshot& snap) {
  const auto cl = clusters(snap);
  for (const auto& [c, vc] : cl)
    if (!snap.topo.connected_subset(vc))
      return {false, "connectivity",
              "cluster " + to_string(c) + " = " + node_list(vc)};

  const auto toks = live_tokens(snap);
  for (const auto& [c, list] : toks)
    if (!cl.count(c))
      return {false, "token", "token of color " + to_string(c) + " has no cluster"};
  for (const auto& [c, vc] : cl) {
    auto it = toks.find(c);
    const std::size_t count = it == toks.end() ? 0 : it->second.size();
    if (count != 1)
      return {false, "token", "cluster " + to_string(c) + " has " +
                                  std::to_string(count) + " tokens"};
    if (!neighborhood(snap.topo, vc).count(it->second[0]->to))
      return {false, "token", "token of " + to_string(c) + " outside N(V_c)"};
  }

  // words vs colors
  std::map<Color, std::set<NodeId>> word_of;
  for (const auto& [c, list] : toks)
    word_of[c] = identities(std::get<TokenMsg>(list[0]->msg).w);
  for (const auto& [v, s] : snap.states) {
    if (s.col.is_clustered()) {
      auto it = word_of.find(s.col.color);
      if (it == word_of.end() || !it->second.count(v))
        return {false, "word", "node " + std::to_string(v) +
                                   " missing from the word of its color"};
    }
    for (const auto& [c, ids] : word_of) {
      const bool mine = s.col.is(c);
      if (!mine && !s.col.is_locked() && ids.count(v))
        return {false, "word", "node " + std::to_string(v) + " occurs in " +
                                   to_string(c) + "'s word"};
    }
  }

  // carried tree edges must be live links
  for (const auto& [c, list] : toks) {
    const auto& w = std::get<TokenMsg>(list[0]->msg).w;
    RootedTree t = build_tree(w);
    for (const auto& [child, father] : t.parent)
      if (!snap.topo.has_edge(child, father))
        return {false, "tree-edge", "token " + to_string(c) + " carries dead link " +
                                        std::to_string(child) + "-" +
                                        std::to_string(father)};
  }

  for (const auto& [id, msg] : snap.in_flight)
    if (std::holds_alternative<DeleteMsg>(msg.msg))
      return {false, "delete", "Delete message in flight"};
  return {};
}

std::set<NodeId> locality_diff(const ConfigurationSnapshot& before,
                               const ConfigurationSnapshot& after) {
  std::set<NodeId> out;
  for (const auto& [v, s] : before.states) {
    auto it = after.states.find(v);
    if (it == after.states.end() || !(it->second.col == s.col)) out.insert(v);
  }
  for (const auto& [v, s] : after.states)
    if (!before.states.count(v)) out.insert(v);
  return out;
}

std::set<NodeId> locality_region(const ConfigurationSnapshot& before,
                                 const std::set<NodeId>& vc) {
  const auto cl = clusters(before);
  std::set<NodeId> region = vc;
  const auto nb = neighborhood(before.topo, vc);
  for (const auto& [c, nodes] : cl) {
    bool adjacent = false;
    for (NodeId v : nodes)
      if (nb.count(v)) { adjacent = true; break; }
    if (adjacent) region.insert(nodes.begin(), nodes.end());
  }
  return region;
}

bool delete_in_flight(const ConfigurationSnapshot& snap) {
  for (const auto& [id, m] : snap.in_flight)
    if (std::holds_alternative<DeleteMsg>(m.msg)) return true;
  return false;
}

std::set<NodeId> wave_touched_nodes(const ConfigurationSnapshot& snap) {
  std::set<NodeId> out;
  for (const auto& [id, m] : snap.in_flight) {
    const RootedTree* tree = nullptr;
    if (const auto* d = std::get_if<DissolutionMsg>(&m.msg)) tree = &d->tree;
    if (const auto* f = std::get_if<FeedbackDissMsg>(&m.msg)) tree = &f->tree;
    if (const auto* d = std::get_if<DivisionMsg>(&m.msg)) tree = &d->tree;
    if (const auto* f = std::get_if<FeedbackDivMsg>(&m.msg)) tree = &f->tree;
    if (tree)
      for (NodeId v : tree->nodes()) out.insert(v);
  }
  for (const auto& [v, s] : snap.states) {
    if (!s.waves.empty()) {
      out.insert(v);
      for (const auto& w : s.waves)
        if (w.tree.contains(v))  // replayed snapshots carry placeholder records
          for (NodeId u : w.tree.nodes()) out.insert(u);
    }
    if (s.col.is_locked()) out.insert(v);
  }
  return out;
}

Report check_token_invariants(const ConfigurationSnapshot& snap,
                              Variant variant) {
  const auto cl = clusters(snap);
  const auto toks = live_tokens(snap);

  for (const auto& [c, list] : toks) {
    if (list.size() > 1)
      return {false, "single-token", "color " + to_string(c) + " has " +
                                         std::to_string(list.size()) + " tokens"};
    if (variant == Variant::Static && !cl.count(c))
      return {false, "single-token",
              "token of color " + to_string(c) + " but V_c is empty"};
  }
  if (variant == Variant::Mobile) return {};

  // Quiescence: no Delete anywhere, and no wave message or open wave
  // record touching the cluster.
  const std::set<NodeId> wave_touched = wave_touched_nodes(snap);

  if (delete_in_flight(snap)) return {};
  for (const auto& [c, vc] : cl) {
    bool touched = false;
    for (NodeId v : vc)
      if (wave_touched.count(v)) { touched = true; break; }
    if (touched) continue;
    auto it = toks.find(c);
    if (it == toks.end())
      return {false, "single-token",
              "quiescent cluster " + to_string(c) + " has no token"};
    if (!neighborhood(snap.topo, vc).count(it->second[0]->to))
      return {false, "single-token",
              "token of " + to_string(c) + " outside N(V_c)"};
  }
  return {};
}

Report check_word_bounds(const ConfigurationSnapshot& snap) {
  for (const auto& [id, m] : snap.in_flight) {
    if (const auto* tok = std::get_if<TokenMsg>(&m.msg)) {
      if (tok->w.empty())
        return {false, "word-bound", "empty token word"};
      if (tok->w.size() > 2 * nb_identities(tok->w) - 1)
        return {false, "word-bound",
                to_string(tok->w) + " exceeds 2n-1"};
    }
  }
  return {};
}

Report check_father_soundness(const ConfigurationSnapshot& snap) {
  const auto toks = live_tokens(snap);
  for (const auto& [c, list] : toks) {
    const auto& w = std::get<TokenMsg>(list[0]->msg).w;
    RootedTree t = build_tree(w);
    for (const auto& [v, s] : snap.states) {
      if (!s.col.is(c) || v == t.root) continue;
      if (!s.father)
        return {false, "father", "node " + std::to_string(v) + " has no father"};
      auto it = t.parent.find(v);
      if (it == t.parent.end() || it->second != *s.father)
        return {false, "father",
                "node " + std::to_string(v) + " father " +
                    std::to_string(*s.father) + " not its tree parent"};
    }
  }
  return {};
}

std::optional<std::string> StableMonotonicityChecker::observe(
    const ConfigurationSnapshot& snap) {
  // Mid-wave memberships are transient (a division repopulates the two
  // successor clusters node by node), so only quiescent nodes count.
  if (delete_in_flight(snap)) return std::nullopt;
  const auto touched = wave_touched_nodes(snap);

  const auto cl = clusters(snap);
  std::map<NodeId, std::size_t> size_of;
  for (const auto& [c, vc] : cl)
    for (NodeId v : vc) size_of[v] = vc.size();

  for (NodeId v : stable_) {
    if (touched.count(v) || !snap.states.count(v)) continue;
    auto it = size_of.find(v);
    if (it == size_of.end() || static_cast<long>(it->second) < m_)
      return "node " + std::to_string(v) + " left a stable cluster";
  }
  for (const auto& [v, n] : size_of)
    if (static_cast<long>(n) >= m_ && !touched.count(v)) stable_.insert(v);
  return std::nullopt;
}

TraceCheckResult verify_trace(const std::vector<TraceLine>& lines) {
  TraceCheckResult res;
  ConfigurationSnapshot snap;
  RunConfig cfg;
  bool in_events = false;
  std::uint64_t current_ev = 0;
  int current_line = 0;
  std::optional<StableMonotonicityChecker> mono;

  auto run_checks = [&]() {
    if (!res.ok) return;
    auto fail = [&](const Report& r) {
      res.ok = false;
      res.violation = r.text();
      res.ev_index = current_ev;
      res.line = current_line;
    };
    Report r = check_token_invariants(snap, cfg.variant);
    if (!r.ok) return fail(r);
    r = check_word_bounds(snap);
    if (!r.ok) return fail(r);
    if (mono) {
      if (auto v = mono->observe(snap))
        return fail(Report{false, "stable-monotonicity", *v});
    }
    if (!res.first_correct_ev && is_correct(snap).ok)
      res.first_correct_ev = current_ev;
    if (!res.first_legitimate_ev && is_legitimate(snap, cfg.m).ok)
      res.first_legitimate_ev = current_ev;
  };

  for (const auto& r : lines) {
    switch (r.kind) {
      case TraceLine::Kind::Config:
        cfg = r.config;
        if (cfg.variant == Variant::Static) mono.emplace(cfg.m);
        break;
      case TraceLine::Kind::Node:
        snap.topo.nodes.insert(r.a);
        snap.states[r.a] = initial_state(r.a);
        break;
      case TraceLine::Kind::Edge:
        snap.topo.add_edge(r.a, r.b);
        break;
      case TraceLine::Kind::Begin:
        in_events = true;
        break;
      case TraceLine::Kind::Event: {
        run_checks();  // configuration between the previous event and this one
        current_ev = r.ev_index;
        current_line = r.line;
        res.events = std::max(res.events, r.ev_index + 1);
        if (r.ev_kind == "deliver") {
          if (!snap.in_flight.count(r.msg_id))
            throw ScenarioError(r.line, "deliver of unknown message id");
          snap.in_flight.erase(r.msg_id);
        } else if (r.ev_kind == "linkdown") {
          snap.topo.remove_edge(r.a, r.b);
        } else if (r.ev_kind == "linkup") {
          snap.topo.add_edge(r.a, r.b);
        } else if (r.ev_kind == "join") {
          snap.topo.nodes.insert(r.a);
          for (NodeId u : r.join_nbrs) snap.topo.add_edge(r.a, u);
          snap.states[r.a] = initial_state(r.a);
        } else if (r.ev_kind == "leave") {
          for (NodeId u : snap.topo.neighbors(r.a)) snap.topo.remove_edge(r.a, u);
          snap.topo.nodes.erase(r.a);
          snap.states.erase(r.a);
        }
        break;
      }
      case TraceLine::Kind::Send: {
        if (!in_events) throw ScenarioError(r.line, "send before begin");
        InFlight m;
        m.id = r.msg_id;
        m.from = r.a;
        m.to = r.b;
        m.msg = *r.msg;
        m.deliver_at = r.deliver_at;
        if (snap.in_flight.count(m.id))
          throw ScenarioError(r.line, "duplicate message id");
        snap.in_flight[m.id] = std::move(m);
        break;
      }
      case TraceLine::Kind::Drop:
        if (!snap.in_flight.count(r.msg_id))
          throw ScenarioError(r.line, "drop of unknown message id");
        snap.in_flight.erase(r.msg_id);
        break;
      case TraceLine::Kind::State: {
        auto it = snap.states.find(r.a);
        if (it == snap.states.end())
          throw ScenarioError(r.line, "state record for unknown node");
        it->second.col = r.col;
        it->second.word = r.word;
        it->second.father = r.father;
        it->second.waves.clear();
        it->second.waves.resize(r.waves_count);
        break;
      }
      case TraceLine::Kind::NodeLeft:
        break;
      case TraceLine::Kind::Note:
      case TraceLine::Kind::Snapshot:
        break;
      case TraceLine::Kind::End:
        run_checks();
        res.final_correct = is_correct(snap).ok;
        res.final_legitimate = is_legitimate(snap, cfg.m).ok;
        return res;
    }
    if (!res.ok) return res;
  }
  run_checks();
  res.final_correct = is_correct(snap).ok;
  res.final_legitimate = is_legitimate(snap, cfg.m).ok;
  return res;
}

}  // namespace rwc
