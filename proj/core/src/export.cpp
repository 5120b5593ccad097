#include "rwc/export.hpp"

#include <istream>
#include <sstream>

#include "rwc/trace.hpp"

namespace rwc {

namespace {

std::string id_list(const std::set<NodeId>& s) {
  std::ostringstream os;
  os << '<';
  bool first = true;
  for (NodeId v : s) {
    if (!first) os << ',';
    first = false;
    os << v;
  }
  os << '>';
  return os.str();
}

}  // namespace

ExportedClustering make_clustering(const ConfigurationSnapshot& snap, int m,
                                   Variant variant) {
  ExportedClustering ec;
  ec.m = m;
  ec.variant = variant;
  std::map<Color, ClusterExport> by_color;
  for (const auto& [v, s] : snap.states) {
    if (s.col.is_free()) ec.free_nodes.insert(v);
    else if (s.col.is_locked()) ec.locked_nodes.insert(v);
    else {
      auto& c = by_color[s.col.color];
      c.col = s.col.color;
      c.nodes.insert(v);
    }
  }
  for (const auto& [id, msg] : snap.in_flight) {
    if (const auto* tok = std::get_if<TokenMsg>(&msg.msg)) {
      auto it = by_color.find(tok->col);
      if (it != by_color.end()) it->second.token = {msg.from, msg.to};
    }
  }
  for (auto& [c, ce] : by_color) ec.clusters.push_back(std::move(ce));
  return ec;
}

std::string emit_clustering(const ExportedClustering& ec) {
  std::ostringstream os;
  os << "rwc-clustering 1\n";
  os << "m=" << ec.m << " variant=" << to_string(ec.variant) << '\n';
  for (const auto& c : ec.clusters) {
    os << "cluster col=" << to_string(c.col) << " nodes=" << id_list(c.nodes)
       << " token=";
    if (c.token) os << c.token->first << '>' << c.token->second;
    else os << '-';
    os << '\n';
  }
  os << "free nodes=" << id_list(ec.free_nodes) << '\n';
  os << "locked nodes=" << id_list(ec.locked_nodes) << '\n';
  os << "end\n";
  return os.str();
}

ExportedClustering parse_clustering(std::istream& in) {
  ExportedClustering ec;
  std::string line;
  int n = 0;
  bool magic = false, header = false, ended = false;
  auto ids_of = [](const std::string& s) {
    auto w = parse_word(s);
    return std::set<NodeId>(w.ids.begin(), w.ids.end());
  };
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line[0] == '#') continue;
    if (ended) throw ScenarioError(n, "content after end");
    if (!magic) {
      if (line != "rwc-clustering 1") throw ScenarioError(n, "not a clustering file");
      magic = true;
      continue;
    }
    std::istringstream is(line);
    std::string head;
    is >> head;
    if (!header) {
      std::string rest = head, tok;
      // header: m=<int> variant=<v>
      auto eat = [&](const std::string& t) {
        auto eq = t.find('=');
        if (eq == std::string::npos) throw ScenarioError(n, "bad header");
        std::string key = t.substr(0, eq), val = t.substr(eq + 1);
        if (key == "m") ec.m = std::stoi(val);
        else if (key == "variant")
          ec.variant = val == "mobile" ? Variant::Mobile : Variant::Static;
        else throw ScenarioError(n, "unknown header key " + key);
      };
      eat(rest);
      while (is >> tok) eat(tok);
      header = true;
      continue;
    }
    try {
      if (head == "cluster") {
        ClusterExport c;
        std::string t;
        while (is >> t) {
          auto eq = t.find('=');
          if (eq == std::string::npos) throw ScenarioError(n, "bad cluster field");
          std::string key = t.substr(0, eq), val = t.substr(eq + 1);
          if (key == "col") c.col = parse_color(val);
          else if (key == "nodes") c.nodes = ids_of(val);
          else if (key == "token") {
            if (val != "-") {
              auto gt = val.find('>');
              if (gt == std::string::npos) throw ScenarioError(n, "bad token field");
              c.token = {static_cast<NodeId>(std::stol(val.substr(0, gt))),
                         static_cast<NodeId>(std::stol(val.substr(gt + 1)))};
            }
          } else {
            throw ScenarioError(n, "unknown cluster field " + key);
          }
        }
        ec.clusters.push_back(std::move(c));
      } else if (head == "free" || head == "locked") {
        std::string t;
        is >> t;
        auto eq = t.find('=');
        if (eq == std::string::npos || t.substr(0, eq) != "nodes")
          throw ScenarioError(n, "expected nodes=<...>");
        auto ids = ids_of(t.substr(eq + 1));
        if (head == "free") ec.free_nodes = std::move(ids);
        else ec.locked_nodes = std::move(ids);
      } else if (head == "end") {
        ended = true;
      } else {
        throw ScenarioError(n, "unknown directive '" + head + "'");
      }
    } catch (const ScenarioError&) {
      throw;
    } catch (const std::exception& e) {
      throw ScenarioError(n, std::string("malformed record: ") + e.what());
    }
  }
  if (!ended) throw ScenarioError(n, "missing end");
  return ec;
}

std::string emit_dot(const ExportedClustering& ec, const Topology& topo) {
  std::ostringstream os;
  os << "graph clustering {\n";
  os << "  // m=" << ec.m << " variant=" << to_string(ec.variant) << "\n";
  int k = 0;
  for (const auto& c : ec.clusters) {
    os << "  subgraph cluster_" << k++ << " {\n";
    os << "    label=\"" << to_string(c.col);
    if (c.token)
      os << " token " << c.token->first << "->" << c.token->second;
    os << "\";\n";
    for (NodeId v : c.nodes) os << "    n" << v << " [label=\"" << v << "\"];\n";
    os << "  }\n";
  }
  for (NodeId v : ec.free_nodes)
    os << "  n" << v << " [label=\"" << v << "\" style=dashed];\n";
  for (NodeId v : ec.locked_nodes)
    os << "  n" << v << " [label=\"" << v << "\" style=dotted];\n";
  for (const auto& [a, b] : topo.edges)
    os << "  n" << a << " -- n" << b << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace rwc
