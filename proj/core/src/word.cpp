#include "rwc/word.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace rwc {

std::string to_string(const Color& c) {
  std::ostringstream os;
  os << '(' << c.creator << ',' << c.version << ')';
  return os.str();
}

std::string to_string(const CirculatingWord& w) {
  std::ostringstream os;
  os << '<';
  for (std::size_t k = 0; k < w.ids.size(); ++k) {
    if (k) os << ',';
    os << w.ids[k];
  }
  os << '>';
  return os.str();
}

CirculatingWord add_begin(NodeId j, const CirculatingWord& w) {
  CirculatingWord out;
  out.ids.reserve(w.ids.size() + 1);
  out.ids.push_back(j);
  out.ids.insert(out.ids.end(), w.ids.begin(), w.ids.end());
  return out;
}

std::size_t nb_identities(const CirculatingWord& w) {
  return identities(w).size();
}

std::set<NodeId> identities(const CirculatingWord& w) {
  return std::set<NodeId>(w.ids.begin(), w.ids.end());
}

bool contains(const CirculatingWord& w, NodeId i) {
  return std::find(w.ids.begin(), w.ids.end(), i) != w.ids.end();
}

CirculatingWord clean_word(NodeId i, const std::set<NodeId>& neighbors,
                           const CirculatingWord& w) {
  if (w.empty() || w.head() != i)
    throw std::invalid_argument("clean_word: word must start with the cleaning node");

  // Pass 1: the literal scan. z walks left to right; after an entry equal
  // to i, entries are deleted while they duplicate their predecessor or
  // are both unseen so far and not currently adjacent to i. The last
  // entry is never deleted.
  std::vector<NodeId> v = w.ids;
  std::set<NodeId> visited{v[0]};
  std::size_t z = 0;
  while (z + 1 < v.size()) {
    if (v[z] == i) {
      while (v.size() > z + 2 &&
             (v[z + 1] == v[z] ||
              (!visited.count(v[z + 1]) && !neighbors.count(v[z + 1])))) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(z) + 1);
      }
    }
    visited.insert(v[z + 1]);
    ++z;
  }

  // Pass 2: keep first occurrences and the entry right before each first
  // occurrence; collapse would-be adjacent duplicates. First occurrences
  // keep their predecessor, so the decoded tree is unchanged.
  std::vector<NodeId> out;
  std::set<NodeId> seen;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!seen.count(v[k])) {
      seen.insert(v[k]);
      out.push_back(v[k]);
    } else if (k + 1 < v.size() && !seen.count(v[k + 1]) && out.back() != v[k]) {
      out.push_back(v[k]);
    }
  }
  return CirculatingWord{std::move(out)};
}

bool RootedTree::contains(NodeId i) const {
  return i == root || parent.count(i) != 0;
}

std::set<NodeId> RootedTree::nodes() const {
  std::set<NodeId> out{root};
  for (const auto& [child, _] : parent) out.insert(child);
  return out;
}

std::vector<NodeId> RootedTree::sons(NodeId i) const {
  if (!contains(i)) throw std::out_of_range("sons: node not in tree");
  std::vector<NodeId> out;
  for (const auto& [child, father] : parent)
    if (father == i) out.push_back(child);
  return out;  // parent is an ordered map, so this is already ascending
}

std::optional<NodeId> RootedTree::father(NodeId i) const {
  if (!contains(i)) throw std::out_of_range("father: node not in tree");
  auto it = parent.find(i);
  if (it == parent.end()) return std::nullopt;
  return it->second;
}

std::size_t RootedTree::subtree_size(NodeId v) const {
  std::size_t n = 1;
  for (NodeId child : sons(v)) n += subtree_size(child);
  return n;
}

std::string to_string(const RootedTree& t) {
  std::ostringstream os;
  os << '{' << t.root << ';';
  bool first = true;
  for (const auto& [child, father] : t.parent) {
    if (!first) os << ',';
    first = false;
    os << child << '>' << father;
  }
  os << '}';
  return os.str();
}

RootedTree build_tree(const CirculatingWord& w) {
  if (w.empty()) throw std::invalid_argument("build_tree: empty word");
  RootedTree t;
  t.root = w.ids[0];
  for (std::size_t k = 1; k < w.ids.size(); ++k) {
    if (!t.contains(w.ids[k])) t.parent[w.ids[k]] = w.ids[k - 1];
  }
  return t;
}

CirculatingWord tree_to_word(const RootedTree& t) {
  std::vector<NodeId> seq;
  std::function<void(NodeId)> dfs = [&](NodeId u) {
    seq.push_back(u);
    for (NodeId child : t.sons(u)) {
      dfs(child);
      seq.push_back(u);
    }
  };
  dfs(t.root);
  std::reverse(seq.begin(), seq.end());
  return CirculatingWord{std::move(seq)};
}

RootedTree remove_subtree(const RootedTree& t, NodeId v) {
  if (v == t.root) throw std::invalid_argument("remove_subtree: cannot remove the root");
  if (!t.contains(v)) throw std::out_of_range("remove_subtree: node not in tree");
  std::set<NodeId> doomed{v};
  // parent map alone suffices: collect descendants by fixpoint
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& [child, father] : t.parent) {
      if (doomed.count(father) && !doomed.count(child)) {
        doomed.insert(child);
        grew = true;
      }
    }
  }
  RootedTree out;
  out.root = t.root;
  for (const auto& [child, father] : t.parent)
    if (!doomed.count(child)) out.parent[child] = father;
  return out;
}

namespace {

// Subtree size of every node in one pass over the parent map.
std::map<NodeId, std::size_t> subtree_sizes(const RootedTree& t) {
  std::map<NodeId, std::size_t> size;
  for (NodeId v : t.nodes()) size[v] = 1;
  // Accumulate bottom-up: repeatedly fold leaves. Cheap at protocol scale.
  std::map<NodeId, std::size_t> pending;  // children left to fold
  for (NodeId v : t.nodes()) pending[v] = t.sons(v).size();
  std::vector<NodeId> ready;
  for (const auto& [v, n] : pending)
    if (n == 0) ready.push_back(v);
  while (!ready.empty()) {
    NodeId v = ready.back();
    ready.pop_back();
    auto it = t.parent.find(v);
    if (it == t.parent.end()) continue;
    size[it->second] += size[v];
    if (--pending[it->second] == 0) ready.push_back(it->second);
  }
  return size;
}

}  // namespace

bool is_divisible(const RootedTree& t, int m) {
  const auto size = subtree_sizes(t);
  const auto n = static_cast<long>(t.node_count());
  for (const auto& [v, k] : size) {
    if (v == t.root) continue;
    const auto kk = static_cast<long>(k);
    if (kk >= m && n - kk >= m) return true;
  }
  return false;
}

Division divide(const RootedTree& t, int m) {
  const auto size = subtree_sizes(t);
  const auto n = static_cast<long>(t.node_count());
  std::optional<NodeId> best;
  long best_gap = 0;
  for (const auto& [v, k] : size) {
    if (v == t.root) continue;
    const auto kk = static_cast<long>(k);
    if (kk < m || n - kk < m) continue;
    const long gap = std::labs(2 * kk - n);  // |k - n/2| without fractions
    if (!best || gap < best_gap || (gap == best_gap && v < *best)) {
      best = v;
      best_gap = gap;
    }
  }
  if (!best) throw std::logic_error("divide: tree is not divisible");

  RootedTree detached;
  detached.root = *best;
  std::set<NodeId> doomed{*best};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& [child, father] : t.parent) {
      if (doomed.count(father) && !doomed.count(child)) {
        doomed.insert(child);
        grew = true;
      }
    }
  }
  for (const auto& [child, father] : t.parent)
    if (doomed.count(child) && child != *best) detached.parent[child] = father;

  return Division{tree_to_word(remove_subtree(t, *best)), tree_to_word(detached)};
}

}  // namespace rwc
