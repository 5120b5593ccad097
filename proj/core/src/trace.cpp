#include "rwc/trace.hpp"

#include <ostream>
#include <sstream>

namespace rwc {

namespace {

std::string pending_text(const NodeState& s) {
  if (!s.pending) return "-";
  std::ostringstream os;
  os << "{to=" << s.pending->neighbor
     << ";col=" << to_string(s.pending->token.col)
     << ";w=" << to_string(s.pending->token.w) << '}';
  return os.str();
}

}  // namespace

std::string state_line(const NodeState& s) {
  std::ostringstream os;
  os << "state " << s.id << " col=" << to_string(s.col)
     << " w=" << to_string(s.word) << " father=";
  if (s.father) os << *s.father; else os << '-';
  os << " ver=" << s.version << " pending=" << pending_text(s)
     << " waves=" << s.waves.size();
  return os.str();
}

void TraceWriter::header(const RunConfig& cfg, const Topology& topo) {
  if (!os_) return;
  *os_ << "rwc-trace 1\n";
  *os_ << "config m=" << cfg.m << " variant=" << to_string(cfg.variant)
       << " seed=" << cfg.seed << " delay=" << cfg.delay_lo << ':'
       << cfg.delay_hi << " awaken=" << cfg.awaken_lo << ':' << cfg.awaken_hi
       << " horizon=" << cfg.horizon_events << " fifo=" << (cfg.fifo_links ? 1 : 0)
       << '\n';
  for (NodeId v : topo.nodes) *os_ << "node " << v << '\n';
  for (const auto& [a, b] : topo.edges) *os_ << "edge " << a << ' ' << b << '\n';
  *os_ << "begin\n";
}

void TraceWriter::event_awaken(std::uint64_t n, SimTime t, NodeId v, bool coin,
                               NodeId chosen) {
  if (!os_) return;
  *os_ << "ev " << n << " t=" << t << " awaken node=" << v
       << " coin=" << (coin ? 1 : 0) << " chosen=" << chosen << '\n';
}

void TraceWriter::event_deliver(std::uint64_t n, SimTime t, const InFlight& m) {
  if (!os_) return;
  *os_ << "ev " << n << " t=" << t << " deliver id=" << m.id
       << " from=" << m.from << " to=" << m.to << ' ' << to_string(m.msg)
       << '\n';
}

void TraceWriter::event_mobility(std::uint64_t n, SimTime t,
                                 const MobilityEvent& e) {
  if (!os_) return;
  *os_ << "ev " << n << " t=" << t << ' ' << to_string(e.kind);
  switch (e.kind) {
    case MobilityEvent::Kind::LinkDown:
    case MobilityEvent::Kind::LinkUp:
      *os_ << " a=" << e.a << " b=" << e.b;
      break;
    case MobilityEvent::Kind::Join: {
      *os_ << " node=" << e.a << " nbrs=<";
      bool first = true;
      for (NodeId u : e.nbrs) {
        if (!first) *os_ << ',';
        first = false;
        *os_ << u;
      }
      *os_ << '>';
      break;
    }
    case MobilityEvent::Kind::Leave:
      *os_ << " node=" << e.a;
      break;
  }
  *os_ << '\n';
}

void TraceWriter::send(const InFlight& m) {
  if (!os_) return;
  *os_ << "send id=" << m.id << " from=" << m.from << " to=" << m.to
       << " at=" << m.deliver_at << ' ' << to_string(m.msg) << '\n';
}

void TraceWriter::drop(const InFlight& m, const std::string& reason) {
  if (!os_) return;
  *os_ << "drop id=" << m.id << " from=" << m.from << " to=" << m.to
       << " reason=" << reason << ' ' << to_string(m.msg) << '\n';
}

void TraceWriter::state(const NodeState& s) {
  if (!os_) return;
  *os_ << state_line(s) << '\n';
}

void TraceWriter::node_left(NodeId v) {
  if (!os_) return;
  *os_ << "left " << v << '\n';
}

void TraceWriter::note(NodeId v, const std::string& text) {
  if (!os_) return;
  *os_ << "note " << v << ' ' << text << '\n';
}

void TraceWriter::snapshot(const ConfigurationSnapshot& snap, std::uint64_t n,
                           SimTime t) {
  if (!os_) return;
  *os_ << "snapshot ev=" << n << " t=" << t << '\n';
  for (const auto& [v, s] : snap.states) *os_ << "  " << state_line(s) << '\n';
  for (const auto& [id, m] : snap.in_flight)
    *os_ << "  inflight id=" << id << " from=" << m.from << " to=" << m.to
         << " at=" << m.deliver_at << ' ' << to_string(m.msg) << '\n';
}

void TraceWriter::footer(bool converged, std::uint64_t events, SimTime t,
                         std::uint64_t sent, std::uint64_t delivered,
                         std::uint64_t dropped) {
  if (!os_) return;
  *os_ << "end converged=" << (converged ? 1 : 0) << " events=" << events
       << " t=" << t << " sent=" << sent << " delivered=" << delivered
       << " dropped=" << dropped << '\n';
}

// ---- parsing --------------------------------------------------------------

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw std::invalid_argument(what);
}

long long to_ll(const std::string& s) {
  std::size_t pos = 0;
  long long v = std::stoll(s, &pos);
  if (pos != s.size()) bad("trailing junk in number '" + s + "'");
  return v;
}

}  // namespace

Color parse_color(const std::string& s) {
  // (creator,version)
  if (s.size() < 5 || s.front() != '(' || s.back() != ')') bad("bad color " + s);
  auto comma = s.find(',');
  if (comma == std::string::npos) bad("bad color " + s);
  Color c;
  c.creator = static_cast<NodeId>(to_ll(s.substr(1, comma - 1)));
  c.version =
      static_cast<std::uint32_t>(to_ll(s.substr(comma + 1, s.size() - comma - 2)));
  return c;
}

CirculatingWord parse_word(const std::string& s) {
  if (s.size() < 2 || s.front() != '<' || s.back() != '>') bad("bad word " + s);
  CirculatingWord w;
  std::string body = s.substr(1, s.size() - 2);
  if (body.empty()) return w;
  std::istringstream is(body);
  std::string item;
  while (std::getline(is, item, ','))
    w.ids.push_back(static_cast<NodeId>(to_ll(item)));
  return w;
}

RootedTree parse_tree(const std::string& s) {
  // {root;child>parent,child>parent,...}
  if (s.size() < 3 || s.front() != '{' || s.back() != '}') bad("bad tree " + s);
  std::string body = s.substr(1, s.size() - 2);
  auto semi = body.find(';');
  if (semi == std::string::npos) bad("bad tree " + s);
  RootedTree t;
  t.root = static_cast<NodeId>(to_ll(body.substr(0, semi)));
  std::string rest = body.substr(semi + 1);
  if (rest.empty()) return t;
  std::istringstream is(rest);
  std::string item;
  while (std::getline(is, item, ',')) {
    auto gt = item.find('>');
    if (gt == std::string::npos) bad("bad tree edge " + item);
    NodeId child = static_cast<NodeId>(to_ll(item.substr(0, gt)));
    NodeId father = static_cast<NodeId>(to_ll(item.substr(gt + 1)));
    t.parent[child] = father;
  }
  return t;
}

namespace {

// key=value fields of a message/state tail, in original order
std::map<std::string, std::string> fields(std::istringstream& is) {
  std::map<std::string, std::string> out;
  std::string t;
  while (is >> t) {
    auto eq = t.find('=');
    if (eq == std::string::npos) bad("expected key=value, got '" + t + "'");
    out[t.substr(0, eq)] = t.substr(eq + 1);
  }
  return out;
}

}  // namespace

Message parse_message(const std::string& s) {
  std::istringstream is(s);
  std::string kind;
  is >> kind;
  auto f = fields(is);
  auto need = [&](const char* k) -> const std::string& {
    auto it = f.find(k);
    if (it == f.end()) bad(std::string("message missing field ") + k);
    return it->second;
  };
  if (kind == "token") return TokenMsg{parse_color(need("col")), parse_word(need("w"))};
  if (kind == "ack") return TokenAckMsg{parse_color(need("col"))};
  if (kind == "delete") return DeleteMsg{parse_color(need("col"))};
  if (kind == "diss") return DissolutionMsg{parse_tree(need("tree"))};
  if (kind == "fbdiss") return FeedbackDissMsg{parse_tree(need("tree"))};
  if (kind == "div")
    return DivisionMsg{parse_tree(need("tree")), parse_color(need("c1")),
                       parse_word(need("w1")), parse_color(need("c2")),
                       parse_word(need("w2"))};
  if (kind == "fbdiv")
    return FeedbackDivMsg{parse_tree(need("tree")), parse_color(need("c1")),
                          parse_word(need("w1")), parse_color(need("c2")),
                          parse_word(need("w2"))};
  bad("unknown message kind '" + kind + "'");
}

namespace {

NodeColor parse_node_color(const std::string& s) {
  if (s == "free") return NodeColor::free();
  if (s == "locked") return NodeColor::locked();
  return NodeColor::of(parse_color(s));
}

// splits "ev 3 t=17 deliver id=4 from=1 to=2 token col=(1,0) w=<1>" into
// leading tokens; message tails are re-joined by the caller.
std::vector<std::string> split(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

std::string value_of(const std::string& token, const char* key, int line) {
  auto eq = token.find('=');
  if (eq == std::string::npos || token.substr(0, eq) != key)
    throw ScenarioError(line, std::string("expected ") + key + "=..., got '" + token + "'");
  return token.substr(eq + 1);
}

std::string rejoin(const std::vector<std::string>& tk, std::size_t from) {
  std::string out;
  for (std::size_t k = from; k < tk.size(); ++k) {
    if (k > from) out += ' ';
    out += tk[k];
  }
  return out;
}

}  // namespace

std::vector<TraceLine> parse_trace(std::istream& in) {
  std::vector<TraceLine> out;
  std::string line;
  int n = 0;
  bool have_magic = false;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line[0] == '#') continue;
    if (!have_magic) {
      if (line != "rwc-trace 1") throw ScenarioError(n, "not an rwc trace");
      have_magic = true;
      continue;
    }
    // snapshot blocks are indented echoes of state already tracked
    if (line.size() >= 2 && line[0] == ' ' && line[1] == ' ') continue;
    auto tk = split(line);
    if (tk.empty()) continue;
    TraceLine r;
    r.line = n;
    try {
      if (tk[0] == "config") {
        r.kind = TraceLine::Kind::Config;
        for (std::size_t k = 1; k < tk.size(); ++k) {
          auto eq = tk[k].find('=');
          if (eq == std::string::npos) throw ScenarioError(n, "bad config entry");
          std::string key = tk[k].substr(0, eq), val = tk[k].substr(eq + 1);
          if (key == "m") r.config.m = std::stoi(val);
          else if (key == "variant")
            r.config.variant = val == "mobile" ? Variant::Mobile : Variant::Static;
          else if (key == "seed") r.config.seed = std::stoull(val);
          else if (key == "horizon") r.config.horizon_events = std::stoull(val);
          else if (key == "fifo") r.config.fifo_links = val == "1";
          else if (key == "delay" || key == "awaken") {
            auto colon = val.find(':');
            if (colon == std::string::npos) throw ScenarioError(n, "bad range");
            SimTime lo = std::stoll(val.substr(0, colon));
            SimTime hi = std::stoll(val.substr(colon + 1));
            if (key == "delay") { r.config.delay_lo = lo; r.config.delay_hi = hi; }
            else { r.config.awaken_lo = lo; r.config.awaken_hi = hi; }
          } else {
            throw ScenarioError(n, "unknown config key " + key);
          }
        }
      } else if (tk[0] == "node") {
        r.kind = TraceLine::Kind::Node;
        r.a = static_cast<NodeId>(std::stol(tk.at(1)));
      } else if (tk[0] == "edge") {
        r.kind = TraceLine::Kind::Edge;
        r.a = static_cast<NodeId>(std::stol(tk.at(1)));
        r.b = static_cast<NodeId>(std::stol(tk.at(2)));
      } else if (tk[0] == "begin") {
        r.kind = TraceLine::Kind::Begin;
      } else if (tk[0] == "ev") {
        r.kind = TraceLine::Kind::Event;
        r.ev_index = std::stoull(tk.at(1));
        r.t = std::stoll(value_of(tk.at(2), "t", n));
        r.ev_kind = tk.at(3);
        if (r.ev_kind == "awaken") {
          r.a = static_cast<NodeId>(std::stol(value_of(tk.at(4), "node", n)));
          r.coin = value_of(tk.at(5), "coin", n) == "1";
          r.chosen = static_cast<NodeId>(std::stol(value_of(tk.at(6), "chosen", n)));
        } else if (r.ev_kind == "deliver") {
          r.msg_id = std::stoull(value_of(tk.at(4), "id", n));
          r.a = static_cast<NodeId>(std::stol(value_of(tk.at(5), "from", n)));
          r.b = static_cast<NodeId>(std::stol(value_of(tk.at(6), "to", n)));
          r.msg = parse_message(rejoin(tk, 7));
        } else if (r.ev_kind == "linkdown" || r.ev_kind == "linkup") {
          r.a = static_cast<NodeId>(std::stol(value_of(tk.at(4), "a", n)));
          r.b = static_cast<NodeId>(std::stol(value_of(tk.at(5), "b", n)));
        } else if (r.ev_kind == "join") {
          r.a = static_cast<NodeId>(std::stol(value_of(tk.at(4), "node", n)));
          auto w = parse_word(value_of(tk.at(5), "nbrs", n));
          r.join_nbrs = w.ids;
        } else if (r.ev_kind == "leave") {
          r.a = static_cast<NodeId>(std::stol(value_of(tk.at(4), "node", n)));
        } else {
          throw ScenarioError(n, "unknown event kind " + r.ev_kind);
        }
      } else if (tk[0] == "send" || tk[0] == "drop") {
        r.kind = tk[0] == "send" ? TraceLine::Kind::Send : TraceLine::Kind::Drop;
        r.msg_id = std::stoull(value_of(tk.at(1), "id", n));
        r.a = static_cast<NodeId>(std::stol(value_of(tk.at(2), "from", n)));
        r.b = static_cast<NodeId>(std::stol(value_of(tk.at(3), "to", n)));
        std::size_t next = 4;
        if (r.kind == TraceLine::Kind::Send)
          r.deliver_at = std::stoll(value_of(tk.at(4), "at", n)), next = 5;
        else
          r.reason = value_of(tk.at(4), "reason", n), next = 5;
        r.msg = parse_message(rejoin(tk, next));
      } else if (tk[0] == "state") {
        r.kind = TraceLine::Kind::State;
        r.a = static_cast<NodeId>(std::stol(tk.at(1)));
        r.col = parse_node_color(value_of(tk.at(2), "col", n));
        r.word = parse_word(value_of(tk.at(3), "w", n));
        std::string f = value_of(tk.at(4), "father", n);
        if (f != "-") r.father = static_cast<NodeId>(std::stol(f));
        r.waves_count = std::stoull(value_of(tk.at(7), "waves", n));
      } else if (tk[0] == "left") {
        r.kind = TraceLine::Kind::NodeLeft;
        r.a = static_cast<NodeId>(std::stol(tk.at(1)));
      } else if (tk[0] == "note") {
        r.kind = TraceLine::Kind::Note;
        r.a = static_cast<NodeId>(std::stol(tk.at(1)));
        r.text = rejoin(tk, 2);
      } else if (tk[0] == "snapshot") {
        r.kind = TraceLine::Kind::Snapshot;
      } else if (tk[0] == "end") {
        r.kind = TraceLine::Kind::End;
        r.converged = value_of(tk.at(1), "converged", n) == "1";
        r.events = std::stoull(value_of(tk.at(2), "events", n));
        r.t = std::stoll(value_of(tk.at(3), "t", n));
        r.sent = std::stoull(value_of(tk.at(4), "sent", n));
        r.delivered = std::stoull(value_of(tk.at(5), "delivered", n));
        r.dropped = std::stoull(value_of(tk.at(6), "dropped", n));
      } else {
        throw ScenarioError(n, "unknown trace record '" + tk[0] + "'");
      }
    } catch (const ScenarioError&) {
      throw;
    } catch (const std::exception& e) {
      throw ScenarioError(n, std::string("malformed record: ") + e.what());
    }
    out.push_back(std::move(r));
  }
  if (!have_magic) throw ScenarioError(1, "empty trace");
  return out;
}

}  // namespace rwc
