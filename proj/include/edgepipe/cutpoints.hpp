#pragma once

#include <vector>

#include "edgepipe/model_dag.hpp"

namespace edgepipe {

/// Candidate partition points in ascending topological depth. points[0] is
/// always the source; for a valid single-sink DAG the last point is the sink.
struct CutPointList {
  std::vector<int> points;
  std::vector<int> depths;  // indexed by layer id; longest-path depth from source
};

/// Longest-path (edge count) from the source to every vertex, by topological
/// relaxation. depth[source] == 0.
std::vector<int> longest_path_depths(const ModelDag& dag);

/// True iff every path starting at v_prev reaches v without first visiting a
/// vertex of greater topological depth than v. Modified DFS with memoized
/// per-vertex verdicts.
bool all_paths_through(const ModelDag& dag, int v_prev, int v);

/// A vertex u is appended iff its longest-path depth is unique among all
/// vertices and all_paths_through(previous point, u) holds; the source is
/// always the first point.
CutPointList candidate_points(const ModelDag& dag);

/// Brute-force oracle: enumerates every source-to-sink path explicitly; a
/// vertex qualifies iff it lies on all of them and has a unique depth. Only
/// for small DAGs; throws once the path count exceeds 10^6.
CutPointList oracle_candidate_points(const ModelDag& dag);

}  // namespace edgepipe
