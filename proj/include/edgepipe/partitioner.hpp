#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "edgepipe/cutpoints.hpp"
#include "edgepipe/model_dag.hpp"

namespace edgepipe {

/// Combined ZFP * LZ4 compression ratio applied to activation transfers.
constexpr double kDefaultLambda = 1.44 * 2.1;

/// Thrown when a model cannot be split into partitions that respect the node
/// memory capacity.
class InfeasibleError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Compressed size, in bytes, of the activation emitted at a partition
/// boundary.
double transfer_size(const Layer& layer, double lambda = kDefaultLambda);

/// Per-model precomputation shared by the optimizer and the baselines.
/// Candidate points split the layer set into segments; seg_mem[k] is the
/// parameter footprint of the layers strictly after point k-1 up to and
/// including point k (segment 0 is just the source layer).
struct PartitionContext {
  CutPointList points;
  std::vector<std::vector<int>> seg_layers;    // per point index
  std::vector<std::uint64_t> seg_mem;          // param bytes per segment
  std::vector<std::uint64_t> boundary_bytes;   // raw output bytes at each point
  double lambda = kDefaultLambda;
  std::uint64_t kappa = 0;                     // node memory capacity, bytes

  int num_points() const { return static_cast<int>(points.points.size()); }
  std::uint64_t span_mem(int i, int j) const {
    std::uint64_t m = 0;
    for (int k = i; k <= j; ++k) m += seg_mem[k];
    return m;
  }
  bool feasible(int i, int j) const { return span_mem(i, j) < kappa; }
  double transfer(int point_idx) const {
    return static_cast<double>(boundary_bytes[point_idx]) / lambda;
  }
};

PartitionContext make_partition_context(const ModelDag& dag,
                                        const CutPointList& points,
                                        double lambda, std::uint64_t kappa);

/// DAG over memory-feasible contiguous spans of candidate points. Vertices
/// are spans [i..j]; the children of a span are exactly the spans starting at
/// j+1, and the edge weight to any of them is the transfer size at point j.
struct PartitionGraph {
  struct SpanVertex {
    int i = 0, j = 0;
    std::uint64_t mem_bytes = 0;
  };
  std::vector<SpanVertex> vertices;       // ordered by (i, j)
  std::vector<std::vector<int>> by_start; // span indices grouped by i
  PartitionContext ctx;

  bool is_root(const SpanVertex& v) const { return v.i == 0; }
  bool is_leaf(const SpanVertex& v) const { return v.j == ctx.num_points() - 1; }
  double edge_weight(const SpanVertex& u) const { return ctx.transfer(u.j); }
};

/// Throws InfeasibleError when a single inter-point segment exceeds kappa
/// (no span can cover it).
PartitionGraph build_partition_graph(const PartitionContext& ctx);

struct Partition {
  int span_begin = 0, span_end = 0;  // candidate-point index range
  std::vector<int> layer_ids;
  std::uint64_t mem_bytes = 0;
  int boundary_point = 0;            // layer id of the last point in the span
  double transfer_bytes = 0;         // compressed output at the boundary
};

struct PartitionPlan {
  std::vector<Partition> partitions;  // execution order
  std::vector<int> Q;                 // boundary layer ids, one per partition
  std::vector<double> S;              // transfer sizes aligned with Q
  std::vector<int> classes;           // class label per S entry (0 = lowest)
  int num_classes = 0;
  double total_cost = 0;              // sum of inter-partition transfers

  // The final S entry is the model output and never crosses an inter-node
  // hop; matching and latency use this view.
  std::vector<double> hop_sizes() const {
    return S.empty() ? std::vector<double>{}
                     : std::vector<double>(S.begin(), S.end() - 1);
  }
};

/// Algorithm: memoized min-cost root-to-leaf path over the partition graph.
/// Ties broken by fewer partitions, then lexicographically smallest span
/// starts. Throws InfeasibleError if no root-to-leaf path exists.
PartitionPlan min_cost_partition(const PartitionGraph& graph);

/// Equal-frequency quantile binning over the sorted distinct values; equal
/// values always share a bin. Returns one label in [0, num_classes) per
/// input, order preserving.
std::vector<int> classify_transfers(const std::vector<double>& S,
                                    int num_classes);

/// Convenience pipeline: candidate points -> partition graph -> min-cost
/// plan, with classes attached.
PartitionPlan plan_partition(const ModelDag& dag, double lambda,
                             std::uint64_t kappa, int num_classes = 3);

}  // namespace edgepipe
