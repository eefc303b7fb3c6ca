#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "edgepipe/commnet.hpp"
#include "edgepipe/kpath.hpp"
#include "edgepipe/partitioner.hpp"

namespace edgepipe {

/// Transfer time in seconds for one hop: bytes over a Mbps link.
double latency_s(double transfer_bytes, double bandwidth_mbps);

/// Unbeatable lower bound on the bottleneck: the largest hop transfer over
/// the best edge in the graph. Zero when there are no hops.
double theorem1_bound(const std::vector<double>& hop_sizes, const CommGraph& g);

/// Node path matched to a partition plan. node_path[i] hosts partition i;
/// hop k moves S[k] over edge (node_path[k], node_path[k+1]).
struct Placement {
  std::vector<int> node_path;
  std::vector<double> hop_latencies;
  double bottleneck = 0;
};

struct PlacementReport {
  PartitionPlan plan;  // the plan actually placed (baselines build their own)
  Placement placement;
  double bound = 0;    // Theorem-1 floor for this plan on this graph
  double ratio = 1.0;  // bottleneck / bound (1.0 when both are zero)
  int classes_used = 0;
  bool retried = false;  // class-count ladder kicked in
};

/// Greedy class matching: hop transfer sizes are split into maximal
/// same-class subarrays, processed from highest class to lowest and longest
/// first; each subarray becomes a (length+1)-vertex maximin path search
/// anchored at whatever neighbors are already placed. Returns nullopt when a
/// subarray admits no path (caller retries with fewer classes).
std::optional<Placement> k_path_matching(const PartitionPlan& plan,
                                         const CommGraph& g, int num_classes,
                                         std::uint64_t rng_seed);

/// k_path_matching plus the fallback ladder: on failure the class count
/// drops by 3 (floor 1) and matching reruns. Throws if even one class fails.
PlacementReport place_optimal(const PartitionPlan& plan, const CommGraph& g,
                              int num_classes, std::uint64_t rng_seed);

/// Baseline 1: random node, random feasible partition extension, repeated
/// until the model is covered; dead ends resampled up to 100 times.
std::optional<PlacementReport> random_placement(const PartitionContext& ctx,
                                                const CommGraph& g,
                                                std::uint64_t rng_seed);

/// Baseline 2: from every start node, greedily grow the smallest-transfer
/// feasible partition while walking the highest-bandwidth unused neighbor;
/// keeps the best resulting bottleneck.
std::optional<PlacementReport> joint_placement(const PartitionContext& ctx,
                                               const CommGraph& g);

}  // namespace edgepipe
