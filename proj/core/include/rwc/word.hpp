#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace rwc {

// Node identifiers are plain ordered integers. Negative values are never
// valid node ids; the protocol layer keeps its "free"/"locked" sentinels
// out of this space entirely.
using NodeId = std::int32_t;

// Cluster identity: the node that minted it plus a per-creator sequence
// number. The static protocol always uses version 0. The order (creator
// first, then version) is what the dissolution asymmetry test compares.
struct Color {
  NodeId creator{0};
  std::uint32_t version{0};

  auto operator<=>(const Color&) const = default;
};

std::string to_string(const Color& c);

// The identifier list carried by a token, most recent entry first:
// ids[0] is the paper-style w[1]. Entry k+1 was written one token move
// before entry k, so consecutive entries were link-adjacent when written.
struct CirculatingWord {
  std::vector<NodeId> ids;

  CirculatingWord() = default;
  explicit CirculatingWord(std::vector<NodeId> v) : ids(std::move(v)) {}

  bool empty() const { return ids.empty(); }
  std::size_t size() const { return ids.size(); }
  NodeId head() const { return ids.front(); }

  bool operator==(const CirculatingWord&) const = default;
};

std::string to_string(const CirculatingWord& w);

CirculatingWord add_begin(NodeId j, const CirculatingWord& w);
std::size_t nb_identities(const CirculatingWord& w);
std::set<NodeId> identities(const CirculatingWord& w);
bool contains(const CirculatingWord& w, NodeId i);

// Word reduction, run by node i right after it prepended itself (so
// w.head() == i; anything else is rejected). Two passes:
//
//  1. the scan from the token-circulation literature: after every entry
//     equal to i, drop following entries while they repeat their
//     predecessor or would attach a brand-new node to i across a link i
//     does not have (that second case only ever fires after mobility);
//  2. keep only entries that are a first occurrence or immediately
//     precede one (the anchor that names the newcomer's father), never
//     keeping two equal entries in a row.
//
// Pass 2 is what actually realizes the documented reduction: it leaves
// the decoded tree untouched, removes all stale suffix data, and caps
// the length at 2n-1 (n first occurrences + at most n-1 anchors).
CirculatingWord clean_word(NodeId i, const std::set<NodeId>& neighbors,
                           const CirculatingWord& w);

// Rooted tree decoded from a word. parent maps every non-root node to
// its father; children lists are kept sorted so traversals are stable.
struct RootedTree {
  NodeId root{0};
  std::map<NodeId, NodeId> parent;

  std::size_t node_count() const { return parent.size() + 1; }
  bool contains(NodeId i) const;
  std::set<NodeId> nodes() const;

  // my_sons / my_father; both throw std::out_of_range if i is not in the tree.
  std::vector<NodeId> sons(NodeId i) const;
  std::optional<NodeId> father(NodeId i) const;

  std::size_t subtree_size(NodeId v) const;

  bool operator==(const RootedTree&) const = default;
};

std::string to_string(const RootedTree& t);

// Algorithm: root at w[1]; every later entry not yet in the tree becomes
// a son of the entry before it. Throws std::invalid_argument on the
// empty word.
RootedTree build_tree(const CirculatingWord& w);

// Canonical encoding: depth-first traversal (children ascending) writing
// a node on entry and on every return to it, reversed so the root lands
// at index 1. build_tree(tree_to_word(t)) == t and the length is 2n-1.
CirculatingWord tree_to_word(const RootedTree& t);

// Drop v and all its descendants. v must be a non-root member.
RootedTree remove_subtree(const RootedTree& t, NodeId v);

// True iff removing some edge leaves two trees of at least m nodes each,
// i.e. some non-root subtree has size k with k >= m and n-k >= m.
bool is_divisible(const RootedTree& t, int m);

struct Division {
  CirculatingWord w1;  // side keeping the original root
  CirculatingWord w2;  // detached subtree
};

// Split at the non-root node whose subtree size is closest to half the
// tree (smallest id on ties). w1/w2 identity sets partition the tree and
// both have at least m identities. Throws std::logic_error when the tree
// is not divisible.
Division divide(const RootedTree& t, int m);

}  // namespace rwc
