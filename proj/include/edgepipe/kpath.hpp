#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "edgepipe/bitset.hpp"
#include "edgepipe/commnet.hpp"

namespace edgepipe {

/// Undirected graph over dense node indices, adjacency as bit rows.
struct AdjGraph {
  int n = 0;
  std::vector<NodeSet> adj;

  explicit AdjGraph(int nodes = 0) : n(nodes), adj(nodes, NodeSet(nodes)) {}
  void add_edge(int u, int v) {
    adj[u].set(v);
    adj[v].set(u);
  }
  bool has_edge(int u, int v) const { return adj[u].test(v); }
};

struct KPathQuery {
  AdjGraph graph;
  int k = 1;                 // number of vertices on the path
  std::optional<int> start;  // fixed first vertex
  std::optional<int> end;    // fixed last vertex
  double delta = 0.01;       // false-negative probability bound
  std::uint64_t rng_seed = 0;
};

struct KPathResult {
  bool found = false;
  std::vector<int> path;  // k vertices when found
  int trials_used = 0;
};

/// Randomized color-coding search for a simple path on exactly k vertices.
/// One-sided error: found == true is always a verified path; found == false
/// is wrong with probability <= delta. Deterministic under rng_seed.
KPathResult find_k_path(const KPathQuery& q);

/// Mutable view of a CommGraph as nodes get assigned to partitions. Assigned
/// nodes leave the free pool; they re-enter a search only as explicit
/// endpoint anchors.
class CommView {
 public:
  explicit CommView(const CommGraph& g)
      : g_(&g), alive_(g.size(), true), alive_count_(g.size()) {}

  const CommGraph& graph() const { return *g_; }
  bool alive(int i) const { return alive_[i]; }
  int alive_count() const { return alive_count_; }
  void erase(int i) {
    if (alive_[i]) {
      alive_[i] = false;
      --alive_count_;
    }
  }

 private:
  const CommGraph* g_;
  std::vector<bool> alive_;
  int alive_count_;
};

struct SubgraphKPathResult {
  bool found = false;
  std::vector<int> path;    // CommGraph node ids
  double threshold = 0;     // max edge-weight cutoff admitting the path
  int probes = 0;
};

/// Binary search over the descending distinct edge weights for the maximum
/// threshold whose induced subgraph (edges >= threshold over free nodes plus
/// the anchors) contains a k-path honoring the anchors. On success the path
/// nodes are erased from the view; anchors stay usable for adjacent runs.
/// Each negative probe is retried once with a fresh seed.
SubgraphKPathResult subgraph_k_path(CommView& view, int k,
                                    std::optional<int> start,
                                    std::optional<int> end, double delta,
                                    std::uint64_t rng_seed);

}  // namespace edgepipe
