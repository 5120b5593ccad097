#include "rwc/sim.hpp"

#include <stdexcept>

namespace rwc {

Simulator::Simulator(Scenario scenario, RunConfig config, TraceWriter* trace)
    : params_{scenario.variant, scenario.m},
      cfg_(config),
      trace_(trace),
      rng_(config.seed) {
  cfg_.m = scenario.m;
  cfg_.variant = scenario.variant;
  cfg_.seed = scenario.seed;
  if (cfg_.delay_lo < 1 || cfg_.delay_lo > cfg_.delay_hi ||
      cfg_.awaken_lo < 1 || cfg_.awaken_lo > cfg_.awaken_hi)
    throw std::invalid_argument("delay/awaken ranges must satisfy 1 <= lo <= hi");
  if (cfg_.m < 1) throw std::invalid_argument("m must be >= 1");
  rng_ = Rng(cfg_.seed);

  snap_.topo = scenario.topo;
  for (NodeId v : snap_.topo.nodes) snap_.states[v] = initial_state(v);

  mobility_ = scenario.mobility;
  for (std::size_t k = 0; k < mobility_.size(); ++k)
    push(QEntry{mobility_[k].at, ++seq_, Ev::Mobility, 0, 0, k});
  mobility_left_ = mobility_.size();

  if (trace_) trace_->header(cfg_, snap_.topo);
  for (NodeId v : snap_.topo.nodes) schedule_awaken(v);
}

void Simulator::push(QEntry e) { queue_.push(e); }

void Simulator::schedule_awaken(NodeId v) {
  if (awaken_scheduled_[v]) return;
  awaken_scheduled_[v] = true;
  push(QEntry{now_ + rng_.range(cfg_.awaken_lo, cfg_.awaken_hi), ++seq_,
              Ev::Awaken, 0, v, 0});
}

std::optional<NodeId> Simulator::pick_neighbor(NodeId v) {
  auto nbrs = snap_.topo.neighbors(v);
  if (nbrs.empty()) return std::nullopt;
  return rng_.pick(nbrs);
}

void Simulator::enqueue_send(NodeId from, NodeId to, Message msg) {
  InFlight m;
  m.id = ++next_msg_id_;
  m.from = from;
  m.to = to;
  m.msg = std::move(msg);
  m.sent_at = now_;
  m.deliver_at = now_ + rng_.range(cfg_.delay_lo, cfg_.delay_hi);
  if (cfg_.fifo_links) {
    auto key = std::make_pair(from, to);
    auto it = fifo_last_.find(key);
    if (it != fifo_last_.end() && m.deliver_at < it->second)
      m.deliver_at = it->second;
    fifo_last_[key] = m.deliver_at;
  }
  ++sent_;
  if (trace_) trace_->send(m);
  push(QEntry{m.deliver_at, ++seq_, Ev::Deliver, m.id, 0, 0});
  snap_.in_flight[m.id] = std::move(m);
}

void Simulator::apply(NodeId node, HandlerResult&& r) {
  for (const auto& s : r.sends) enqueue_send(node, s.to, s.msg);
  snap_.states[node] = std::move(r.state);
  if (trace_) trace_->state(snap_.states[node]);
  for (const auto& n : r.notes)
    if (trace_) trace_->note(node, n);
  if (snap_.states[node].col.is_free()) schedule_awaken(node);
}

void Simulator::drop_link_messages(NodeId a, NodeId b, const std::string& reason) {
  std::vector<std::uint64_t> doomed;
  for (const auto& [id, m] : snap_.in_flight)
    if ((m.from == a && m.to == b) || (m.from == b && m.to == a))
      doomed.push_back(id);
  for (auto id : doomed) {
    if (trace_) trace_->drop(snap_.in_flight[id], reason);
    snap_.in_flight.erase(id);
    ++dropped_;
  }
}

void Simulator::drop_node_messages(NodeId v, const std::string& reason) {
  std::vector<std::uint64_t> doomed;
  for (const auto& [id, m] : snap_.in_flight)
    if (m.from == v || m.to == v) doomed.push_back(id);
  for (auto id : doomed) {
    if (trace_) trace_->drop(snap_.in_flight[id], reason);
    snap_.in_flight.erase(id);
    ++dropped_;
  }
}

void Simulator::do_awaken(NodeId v) {
  awaken_scheduled_[v] = false;
  if (!alive(v)) return;
  const NodeState& st = snap_.states[v];
  if (!st.col.is_free()) {
    // woke up after being recruited; awakening resumes on the next free
    if (trace_) trace_->event_awaken(events_, now_, v, false, v);
    return;
  }
  bool coin = rng_.coin();
  NodeId chosen = pick_neighbor(v).value_or(v);
  if (trace_) trace_->event_awaken(events_, now_, v, coin, chosen);
  apply(v, on_awaken(st, snap_.topo.neighbors(v), params_, coin, chosen));
  if (snap_.states[v].col.is_free()) schedule_awaken(v);
}

void Simulator::do_deliver(const InFlight& m) {
  if (trace_) trace_->event_deliver(events_, now_, m);
  ++delivered_;
  if (!alive(m.to)) {
    if (trace_) trace_->note(m.from, "delivery to a removed node discarded");
    return;
  }
  const NodeState& st = snap_.states[m.to];
  auto nbrs = snap_.topo.neighbors(m.to);
  std::visit(
      [&](const auto& msg) {
        using T = std::decay_t<decltype(msg)>;
        if constexpr (std::is_same_v<T, TokenMsg>) {
          NodeId chosen = pick_neighbor(m.to).value_or(m.to);
          apply(m.to, on_token(st, nbrs, params_, msg, m.from, chosen));
        } else if constexpr (std::is_same_v<T, DissolutionMsg>) {
          apply(m.to, on_dissolution(st, nbrs, params_, msg, m.from));
        } else if constexpr (std::is_same_v<T, FeedbackDissMsg>) {
          apply(m.to, on_feedback_diss(st, nbrs, params_, msg, m.from));
        } else if constexpr (std::is_same_v<T, DivisionMsg>) {
          NodeId chosen = pick_neighbor(m.to).value_or(m.to);
          apply(m.to, on_division(st, nbrs, params_, msg, m.from, chosen));
        } else if constexpr (std::is_same_v<T, FeedbackDivMsg>) {
          NodeId chosen = pick_neighbor(m.to).value_or(m.to);
          apply(m.to, on_feedback_div(st, nbrs, params_, msg, m.from, chosen));
        } else if constexpr (std::is_same_v<T, DeleteMsg>) {
          apply(m.to, on_delete(st, nbrs, params_, msg, m.from));
        } else {
          apply(m.to, on_token_ack(st, params_, msg, m.from));
        }
      },
      m.msg);
}

void Simulator::do_mobility(const MobilityEvent& e) {
  if (trace_) trace_->event_mobility(events_, now_, e);
  switch (e.kind) {
    case MobilityEvent::Kind::LinkDown: {
      if (!snap_.topo.has_edge(e.a, e.b))
        throw std::runtime_error("linkdown of a non-existent link");
      snap_.topo.remove_edge(e.a, e.b);
      drop_link_messages(e.a, e.b, "linkdown");
      for (NodeId v : {std::min(e.a, e.b), std::max(e.a, e.b)}) {
        if (!alive(v)) continue;
        NodeId lost = v == e.a ? e.b : e.a;
        apply(v, on_link_down(snap_.states[v], snap_.topo.neighbors(v), params_,
                              lost, pick_neighbor(v)));
      }
      break;
    }
    case MobilityEvent::Kind::LinkUp:
      if (snap_.topo.has_edge(e.a, e.b))
        throw std::runtime_error("linkup of an existing link");
      snap_.topo.add_edge(e.a, e.b);
      break;
    case MobilityEvent::Kind::Join: {
      if (alive(e.a)) throw std::runtime_error("join of an existing node");
      snap_.topo.nodes.insert(e.a);
      for (NodeId u : e.nbrs) snap_.topo.add_edge(e.a, u);
      snap_.states[e.a] = initial_state(e.a);
      if (trace_) trace_->state(snap_.states[e.a]);
      awaken_scheduled_[e.a] = false;
      schedule_awaken(e.a);
      break;
    }
    case MobilityEvent::Kind::Leave: {
      if (!alive(e.a)) throw std::runtime_error("leave of a missing node");
      for (NodeId u : snap_.topo.neighbors(e.a)) {
        snap_.topo.remove_edge(e.a, u);
        drop_link_messages(e.a, u, "leave");
        apply(u, on_link_down(snap_.states[u], snap_.topo.neighbors(u), params_,
                              e.a, pick_neighbor(u)));
      }
      drop_node_messages(e.a, "leave");
      snap_.topo.nodes.erase(e.a);
      snap_.states.erase(e.a);
      if (trace_) trace_->node_left(e.a);
      break;
    }
  }
}

bool Simulator::step() {
  while (!queue_.empty()) {
    if (events_ >= cfg_.horizon_events) return false;
    QEntry e = queue_.top();
    // stale deliveries: the message was dropped with its link or node
    if (e.kind == Ev::Deliver && !snap_.in_flight.count(e.msg_id)) {
      queue_.pop();
      continue;
    }
    if (e.t > cfg_.max_time) return false;
    queue_.pop();
    now_ = e.t;
    ++events_;
    switch (e.kind) {
      case Ev::Awaken:
        do_awaken(e.node);
        break;
      case Ev::Deliver: {
        InFlight m = snap_.in_flight.at(e.msg_id);
        snap_.in_flight.erase(e.msg_id);
        do_deliver(m);
        break;
      }
      case Ev::Mobility:
        --mobility_left_;
        do_mobility(mobility_[e.mob_index]);
        break;
    }
    return true;
  }
  return false;
}

void Simulator::inject_link_down(SimTime at, NodeId a, NodeId b) {
  if (at < now_) throw std::invalid_argument("cannot schedule in the past");
  mobility_.push_back(MobilityEvent{at, MobilityEvent::Kind::LinkDown, a, b, {}});
  push(QEntry{at, ++seq_, Ev::Mobility, 0, 0, mobility_.size() - 1});
  ++mobility_left_;
}

void Simulator::write_footer(bool converged) {
  if (trace_) trace_->footer(converged, events_, now_, sent_, delivered_, dropped_);
}

}  // namespace rwc
