#include "edgepipe/cutpoints.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace edgepipe {

std::vector<int> longest_path_depths(const ModelDag& dag) {
  std::vector<int> depth(dag.size(), 0);
  for (int u : topo_order(dag))
    for (int v : dag.out_edges(u)) depth[v] = std::max(depth[v], depth[u] + 1);
  return depth;
}

namespace {

// Verdicts: 0 unknown, 1 all paths from here reach the target, -1 some path
// escapes past the target depth or dead-ends first.
int ap_visit(const ModelDag& dag, const std::vector<int>& depth, int target,
             int w, std::vector<int>& memo) {
  if (w == target) return 1;
  if (depth[w] > depth[target]) return -1;
  if (memo[w] != 0) return memo[w];
  int verdict = 1;
  if (dag.out_edges(w).empty()) {
    verdict = -1;  // dead end below the target depth (only the sink can)
  } else {
    for (int c : dag.out_edges(w)) {
      if (ap_visit(dag, depth, target, c, memo) < 0) {
        verdict = -1;
        break;
      }
    }
  }
  memo[w] = verdict;
  return verdict;
}

}  // namespace

bool all_paths_through(const ModelDag& dag, int v_prev, int v) {
  std::vector<int> depth = longest_path_depths(dag);
  std::vector<int> memo(dag.size(), 0);
  return ap_visit(dag, depth, v, v_prev, memo) > 0;
}

CutPointList candidate_points(const ModelDag& dag) {
  CutPointList out;
  out.depths = longest_path_depths(dag);
  const int n = dag.size();

  std::vector<int> depth_count(n, 0);
  for (int v = 0; v < n; ++v) ++depth_count[out.depths[v]];

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return out.depths[a] != out.depths[b] ? out.depths[a] < out.depths[b]
                                          : a < b;
  });

  out.points.push_back(dag.source_id());
  std::vector<int> memo(n);
  for (int u : order) {
    if (u == dag.source_id()) continue;
    if (depth_count[out.depths[u]] != 1) continue;
    std::fill(memo.begin(), memo.end(), 0);
    if (ap_visit(dag, out.depths, u, out.points.back(), memo) > 0)
      out.points.push_back(u);
  }
  // The sink of a valid single-sink DAG always qualifies.
  assert(out.points.back() == dag.sink_id());
  return out;
}

namespace {

constexpr long kPathCap = 1'000'000;

void enumerate_paths(const ModelDag& dag, int u, std::vector<char>& on_path,
                     std::vector<long>& on_count, long& total) {
  on_path[u] = 1;
  if (u == dag.sink_id()) {
    if (++total > kPathCap)
      throw std::runtime_error("oracle path count exceeds safety cap");
    for (int v = 0; v < dag.size(); ++v)
      if (on_path[v]) ++on_count[v];
  } else {
    for (int v : dag.out_edges(u))
      enumerate_paths(dag, v, on_path, on_count, total);
  }
  on_path[u] = 0;
}

}  // namespace

CutPointList oracle_candidate_points(const ModelDag& dag) {
  const int n = dag.size();
  CutPointList out;
  out.depths = longest_path_depths(dag);

  std::vector<char> on_path(n, 0);
  std::vector<long> on_count(n, 0);
  long total = 0;
  enumerate_paths(dag, dag.source_id(), on_path, on_count, total);

  std::vector<int> depth_count(n, 0);
  for (int v = 0; v < n; ++v) ++depth_count[out.depths[v]];

  std::vector<int> pts;
  for (int v = 0; v < n; ++v)
    if (on_count[v] == total && depth_count[out.depths[v]] == 1)
      pts.push_back(v);
  std::sort(pts.begin(), pts.end(),
            [&](int a, int b) { return out.depths[a] < out.depths[b]; });
  out.points = std::move(pts);
  return out;
}

}  // namespace edgepipe
