#include "edgepipe/oracles.hpp"

#include <algorithm>
#include <limits>

namespace edgepipe {

namespace {

bool dfs_k_path(const AdjGraph& g, int k, std::optional<int> end, int cur,
                int depth, std::vector<char>& used) {
  if (depth == k) return !end || cur == *end;
  if (end && cur == *end) return false;  // end may only close the path
  bool ok = false;
  g.adj[cur].for_each([&](int v) {
    if (ok || used[v]) return;
    used[v] = 1;
    if (dfs_k_path(g, k, end, v, depth + 1, used)) ok = true;
    used[v] = 0;
  });
  return ok;
}

void dfs_maximin(const CommGraph& g, int k, std::optional<int> end, int cur,
                 int depth, double cur_min, std::vector<char>& used,
                 double& best) {
  if (depth == k) {
    if (!end || cur == *end) best = std::max(best, cur_min);
    return;
  }
  if (end && cur == *end) return;
  for (int v = 0; v < g.size(); ++v) {
    if (used[v] || g.bw(cur, v) <= 0) continue;
    used[v] = 1;
    dfs_maximin(g, k, end, v, depth + 1, std::min(cur_min, g.bw(cur, v)), used,
                best);
    used[v] = 0;
  }
}

}  // namespace

bool exists_simple_k_path(const AdjGraph& g, int k, std::optional<int> start,
                          std::optional<int> end) {
  if (k < 1 || k > g.n) return false;
  if (k == 1) return !(start && end) || *start == *end;
  std::vector<char> used(g.n, 0);
  if (start) {
    used[*start] = 1;
    return dfs_k_path(g, k, end, *start, 1, used);
  }
  for (int v = 0; v < g.n; ++v) {
    if (end && v == *end && k >= 2) continue;
    used[v] = 1;
    if (dfs_k_path(g, k, end, v, 1, used)) return true;
    used[v] = 0;
  }
  return false;
}

std::optional<double> maximin_k_path_value(const CommGraph& g, int k,
                                           std::optional<int> start,
                                           std::optional<int> end) {
  if (k < 1 || k > g.size()) return std::nullopt;
  if (k == 1) return std::numeric_limits<double>::infinity();
  double best = -1;
  std::vector<char> used(g.size(), 0);
  double inf = std::numeric_limits<double>::infinity();
  if (start) {
    used[*start] = 1;
    dfs_maximin(g, k, end, *start, 1, inf, used, best);
  } else {
    for (int v = 0; v < g.size(); ++v) {
      if (end && v == *end) continue;
      used[v] = 1;
      dfs_maximin(g, k, end, v, 1, inf, used, best);
      used[v] = 0;
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

std::optional<std::uint64_t> exhaustive_min_partition_bytes(
    const PartitionContext& ctx) {
  const int m = ctx.num_points();
  if (m > 20) throw std::invalid_argument("too many points for enumeration");
  std::optional<std::uint64_t> best;
  const std::uint32_t masks = m >= 1 ? (1u << (m - 1)) : 1;
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    // Bit g set means a cut between point g and g+1.
    std::uint64_t cost = 0;
    bool ok = true;
    int start = 0;
    for (int g = 0; g < m; ++g) {
      bool cut = g == m - 1 || (mask >> g) & 1;
      if (!cut) continue;
      if (!ctx.feasible(start, g)) {
        ok = false;
        break;
      }
      if (g != m - 1) cost += ctx.boundary_bytes[g];
      start = g + 1;
    }
    if (ok && (!best || cost < *best)) best = cost;
  }
  return best;
}

}  // namespace edgepipe
