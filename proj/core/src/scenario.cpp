#include "rwc/scenario.hpp"

#include <fstream>
#include <sstream>

namespace rwc {

std::string to_string(MobilityEvent::Kind k) {
  switch (k) {
    case MobilityEvent::Kind::LinkDown: return "linkdown";
    case MobilityEvent::Kind::LinkUp: return "linkup";
    case MobilityEvent::Kind::Join: return "join";
    default: return "leave";
  }
}

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) {
    if (t[0] == '#') break;
    out.push_back(t);
  }
  return out;
}

NodeId parse_id(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size() || v < 0) throw std::invalid_argument(s);
    return static_cast<NodeId>(v);
  } catch (const std::exception&) {
    throw ScenarioError(line, "expected a node id, got '" + s + "'");
  }
}

SimTime parse_time(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size() || v < 0) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ScenarioError(line, "expected a time, got '" + s + "'");
  }
}

void parse_header(const std::vector<std::string>& tk, int line, Scenario& sc) {
  bool saw_m = false, saw_variant = false, saw_seed = false;
  for (const auto& t : tk) {
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ScenarioError(line, "header entries must be key=value, got '" + t + "'");
    const std::string key = t.substr(0, eq), val = t.substr(eq + 1);
    if (key == "m") {
      try {
        sc.m = std::stoi(val);
      } catch (const std::exception&) {
        throw ScenarioError(line, "bad m value '" + val + "'");
      }
      if (sc.m < 1) throw ScenarioError(line, "m must be >= 1");
      saw_m = true;
    } else if (key == "variant") {
      if (val == "static") sc.variant = Variant::Static;
      else if (val == "mobile") sc.variant = Variant::Mobile;
      else throw ScenarioError(line, "variant must be static or mobile");
      saw_variant = true;
    } else if (key == "seed") {
      try {
        sc.seed = std::stoull(val);
      } catch (const std::exception&) {
        throw ScenarioError(line, "bad seed value '" + val + "'");
      }
      saw_seed = true;
    } else {
      throw ScenarioError(line, "unknown header key '" + key + "'");
    }
  }
  if (!saw_m || !saw_variant || !saw_seed)
    throw ScenarioError(line, "header must set m, variant and seed");
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
  Scenario sc;
  std::string line;
  int n = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++n;
    auto tk = tokens(line);
    if (tk.empty()) continue;
    if (!have_header) {
      parse_header(tk, n, sc);
      have_header = true;
      continue;
    }
    if (tk[0] == "node") {
      if (tk.size() != 2) throw ScenarioError(n, "node takes one id");
      NodeId v = parse_id(tk[1], n);
      if (sc.topo.nodes.count(v)) throw ScenarioError(n, "duplicate node");
      sc.topo.nodes.insert(v);
    } else if (tk[0] == "edge") {
      if (tk.size() != 3) throw ScenarioError(n, "edge takes two ids");
      NodeId a = parse_id(tk[1], n), b = parse_id(tk[2], n);
      if (a == b) throw ScenarioError(n, "self loops are not allowed");
      if (!sc.topo.has_node(a) || !sc.topo.has_node(b))
        throw ScenarioError(n, "edge references an undeclared node");
      if (sc.topo.has_edge(a, b)) throw ScenarioError(n, "duplicate edge");
      sc.topo.add_edge(a, b);
    } else if (tk[0] == "at") {
      if (tk.size() < 3) throw ScenarioError(n, "at <time> <kind> ...");
      MobilityEvent e;
      e.at = parse_time(tk[1], n);
      const std::string& kind = tk[2];
      if (kind == "linkdown" || kind == "linkup") {
        if (tk.size() != 5) throw ScenarioError(n, kind + " takes two ids");
        e.kind = kind == "linkdown" ? MobilityEvent::Kind::LinkDown
                                    : MobilityEvent::Kind::LinkUp;
        e.a = parse_id(tk[3], n);
        e.b = parse_id(tk[4], n);
        if (e.a == e.b) throw ScenarioError(n, "self loops are not allowed");
      } else if (kind == "join") {
        if (tk.size() < 5) throw ScenarioError(n, "join <id> <neighbor>...");
        e.kind = MobilityEvent::Kind::Join;
        e.a = parse_id(tk[3], n);
        for (std::size_t k = 4; k < tk.size(); ++k)
          e.nbrs.push_back(parse_id(tk[k], n));
      } else if (kind == "leave") {
        if (tk.size() != 4) throw ScenarioError(n, "leave takes one id");
        e.kind = MobilityEvent::Kind::Leave;
        e.a = parse_id(tk[3], n);
      } else {
        throw ScenarioError(n, "unknown mobility kind '" + kind + "'");
      }
      if (!sc.mobility.empty() && e.at < sc.mobility.back().at)
        throw ScenarioError(n, "mobility times must be non-decreasing");
      sc.mobility.push_back(std::move(e));
    } else {
      throw ScenarioError(n, "unknown directive '" + tk[0] + "'");
    }
  }
  if (!have_header) throw ScenarioError(n == 0 ? 1 : n, "missing header line");
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(0, "cannot open scenario file " + path);
  return parse_scenario(in);
}

void validate_scenario(const Scenario& sc) {
  if (static_cast<int>(sc.topo.nodes.size()) < sc.m)
    throw ScenarioError(0, "scenario has fewer than m nodes");
  if (!sc.topo.connected())
    throw ScenarioError(0, "initial topology is not connected");

  // Replay the script over a copy of the topology so inconsistent
  // mobility is rejected up front.
  Topology t = sc.topo;
  for (const auto& e : sc.mobility) {
    switch (e.kind) {
      case MobilityEvent::Kind::LinkDown:
        if (sc.variant == Variant::Static)
          throw ScenarioError(0, "static variant cannot script linkdown");
        if (!t.has_edge(e.a, e.b))
          throw ScenarioError(0, "linkdown of a non-existent link");
        t.remove_edge(e.a, e.b);
        break;
      case MobilityEvent::Kind::LinkUp:
        if (!t.has_node(e.a) || !t.has_node(e.b))
          throw ScenarioError(0, "linkup references a missing node");
        if (t.has_edge(e.a, e.b))
          throw ScenarioError(0, "linkup of an existing link");
        t.add_edge(e.a, e.b);
        break;
      case MobilityEvent::Kind::Join:
        if (t.has_node(e.a)) throw ScenarioError(0, "join of an existing node");
        t.nodes.insert(e.a);
        for (NodeId u : e.nbrs) {
          if (u == e.a || !t.has_node(u))
            throw ScenarioError(0, "join references a missing neighbor");
          t.add_edge(e.a, u);
        }
        break;
      case MobilityEvent::Kind::Leave: {
        if (sc.variant == Variant::Static)
          throw ScenarioError(0, "static variant cannot script leave");
        if (!t.has_node(e.a)) throw ScenarioError(0, "leave of a missing node");
        auto nbrs = t.neighbors(e.a);
        for (NodeId u : nbrs) t.remove_edge(e.a, u);
        t.nodes.erase(e.a);
        break;
      }
    }
  }
}

}  // namespace rwc
