#pragma once

#include <cstdint>

#include "edgepipe/commnet.hpp"
#include "edgepipe/model_dag.hpp"

namespace edgepipe {

/// Seeded random DAG with a single source (vertex 0), a single sink (vertex
/// n-1), and only forward edges. Used by the oracle-comparison suites.
ModelDag random_dag(int n, std::uint64_t seed, double extra_edge_prob = 0.25);

/// Seeded random undirected weighted graph encoded as a CommGraph; absent
/// edges carry bandwidth 0. Weights uniform in (1, 100) Mbps.
CommGraph random_weighted_graph(int n, std::uint64_t seed,
                                double edge_prob = 0.5);

}  // namespace edgepipe
