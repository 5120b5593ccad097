#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rwc/snapshot.hpp"
#include "rwc/trace.hpp"

namespace rwc {

struct Report {
  bool ok{true};
  std::string clause;   // first failing clause
  std::string witness;  // human-readable witness

  std::string text() const {
    return ok ? "ok" : clause + ": " + witness;
  }
};

// Nodes grouped by cluster color; free and locked nodes are excluded.
std::map<Color, std::set<NodeId>> clusters(const ConfigurationSnapshot& snap);

// V_c plus every node adjacent to it (the paper's N(V_c)).
std::set<NodeId> neighborhood(const Topology& topo, const std::set<NodeId>& vc);

// Brute force over bipartitions of `cluster`: can it be split into two
// connected parts of at least m nodes each? Refuses sets larger than
// `cap` (this oracle is desk-scale by construction).
bool divisibility_oracle(const std::set<NodeId>& cluster, const Topology& topo,
                         int m, std::size_t cap = 16);

// The six legitimacy clauses: total coloring, connected clusters, sizes
// >= m, no divisible cluster (graph-level), exactly one token per cluster
// inside N(V_c), and nothing but Token messages in flight.
Report is_legitimate(const ConfigurationSnapshot& snap, int m);

// The five correct-configuration clauses: connected clusters, exactly one
// token per non-empty color in N(V_c), words consistent with node colors,
// every carried tree edge alive, no Delete in flight.
Report is_correct(const ConfigurationSnapshot& snap);

// Nodes whose color differs between two snapshots (including nodes
// present in only one of them).
std::set<NodeId> locality_diff(const ConfigurationSnapshot& before,
                               const ConfigurationSnapshot& after);

// The region a topological event inside `vc` may legally touch: vc plus
// all clusters owning a node adjacent to vc (computed on `before`).
std::set<NodeId> locality_region(const ConfigurationSnapshot& before,
                                 const std::set<NodeId>& vc);

// Per-snapshot token accounting, valid between any two events. At most
// one live token per color always. In the static variant additionally:
// no token for colors with no members, and for quiescent colors (no wave
// messages or records touching the cluster, no Delete anywhere) exactly
// one token inside N(V_c). The mobile repair path legitimately reseeds
// an emptied cluster with its regenerated token, so those two checks
// only hold eventually there and are left to is_correct/is_legitimate.
Report check_token_invariants(const ConfigurationSnapshot& snap,
                              Variant variant = Variant::Static);

// Every in-flight token word obeys length <= 2*identities - 1.
Report check_word_bounds(const ConfigurationSnapshot& snap);

// Lemma 9 accounting, meaningful on quiescent snapshots of mobile runs:
// every clustered node that is not its token's current root has its
// father recorded as its parent in the token's tree.
Report check_father_soundness(const ConfigurationSnapshot& snap);

// Tracks Lemma 5 across the snapshots of one static run: once a node sat
// in a cluster of size >= m, it must stay in one.
class StableMonotonicityChecker {
 public:
  explicit StableMonotonicityChecker(int m) : m_(m) {}
  // Returns a violation description, or nothing.
  std::optional<std::string> observe(const ConfigurationSnapshot& snap);

 private:
  int m_;
  std::set<NodeId> stable_;
};

// Replays a parsed trace, maintaining the between-events configuration
// and running the invariant suite at every event boundary.
struct TraceCheckResult {
  bool ok{true};
  std::string violation;
  std::uint64_t ev_index{0};  // event index of the first violation
  int line{0};                // trace line of the record that exposed it
  std::uint64_t events{0};
  std::optional<std::uint64_t> first_correct_ev;
  std::optional<std::uint64_t> first_legitimate_ev;
  bool final_correct{false};
  bool final_legitimate{false};
};

TraceCheckResult verify_trace(const std::vector<TraceLine>& lines);

}  // namespace rwc
