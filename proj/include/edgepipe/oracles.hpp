#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "edgepipe/commnet.hpp"
#include "edgepipe/kpath.hpp"
#include "edgepipe/partitioner.hpp"

namespace edgepipe {

// Brute-force reference implementations kept deliberately independent of the
// production code paths they check. Exponential; small inputs only.

/// Any simple path on exactly k vertices honoring the optional anchors?
bool exists_simple_k_path(const AdjGraph& g, int k, std::optional<int> start,
                          std::optional<int> end);

/// Max over all simple k-vertex paths of the minimum edge weight on the
/// path. Edges with non-positive weight are absent. nullopt when no k-path
/// exists.
std::optional<double> maximin_k_path_value(const CommGraph& g, int k,
                                           std::optional<int> start,
                                           std::optional<int> end);

/// Exhaustive minimum over all feasible contiguous partitionings of the
/// candidate points: every cut mask is enumerated, infeasible spans filtered
/// by kappa. Cost is the raw byte sum over internal boundaries. nullopt when
/// nothing is feasible.
std::optional<std::uint64_t> exhaustive_min_partition_bytes(
    const PartitionContext& ctx);

}  // namespace edgepipe
