#include "edgepipe/partitioner.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <optional>

namespace edgepipe {

double transfer_size(const Layer& layer, double lambda) {
  if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
  return static_cast<double>(layer.output_bytes) / lambda;
}

PartitionContext make_partition_context(const ModelDag& dag,
                                        const CutPointList& points,
                                        double lambda, std::uint64_t kappa) {
  if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
  PartitionContext ctx;
  ctx.points = points;
  ctx.lambda = lambda;
  ctx.kappa = kappa;
  const int m = ctx.num_points();
  ctx.seg_layers.assign(m, {});
  ctx.seg_mem.assign(m, 0);
  ctx.boundary_bytes.resize(m);
  for (int k = 0; k < m; ++k)
    ctx.boundary_bytes[k] = dag.layer(points.points[k]).output_bytes;

  // Candidate depths are unique, so every layer's depth falls strictly
  // between two consecutive point depths (or on a point).
  for (int v : topo_order(dag)) {
    int d = points.depths[v];
    int seg = static_cast<int>(
        std::lower_bound(points.points.begin(), points.points.end(), d,
                         [&](int pt, int dd) { return points.depths[pt] < dd; }) -
        points.points.begin());
    assert(seg < m);
    ctx.seg_layers[seg].push_back(v);
    ctx.seg_mem[seg] += dag.layer(v).param_bytes;
  }
  return ctx;
}

PartitionGraph build_partition_graph(const PartitionContext& ctx) {
  const int m = ctx.num_points();
  for (int k = 0; k < m; ++k) {
    if (ctx.seg_mem[k] >= ctx.kappa) {
      if (m <= 2)
        throw InfeasibleError(
            "model not partitionable: no interior candidate points and the "
            "model exceeds node capacity");
      throw InfeasibleError("infeasible: segment ending at point " +
                            std::to_string(ctx.points.points[k]) +
                            " exceeds node capacity");
    }
  }

  PartitionGraph g;
  g.ctx = ctx;
  g.by_start.assign(m, {});
  for (int i = 0; i < m; ++i) {
    std::uint64_t mem = 0;
    for (int j = i; j < m; ++j) {
      mem += ctx.seg_mem[j];
      if (mem >= ctx.kappa) break;  // spans only grow
      g.by_start[i].push_back(static_cast<int>(g.vertices.size()));
      g.vertices.push_back({i, j, mem});
    }
  }
  return g;
}

namespace {

// Suffix solution: spans covering points [start..m-1] plus the cost of the
// internal boundaries. Costs are exact integer byte sums; division by lambda
// happens once at plan assembly.
struct Suffix {
  std::uint64_t cost_bytes = 0;
  std::vector<int> starts;  // span start indices, in order
};

bool better(const Suffix& a, const Suffix& b) {
  if (a.cost_bytes != b.cost_bytes) return a.cost_bytes < b.cost_bytes;
  if (a.starts.size() != b.starts.size()) return a.starts.size() < b.starts.size();
  return a.starts < b.starts;
}

}  // namespace

PartitionPlan min_cost_partition(const PartitionGraph& graph) {
  const PartitionContext& ctx = graph.ctx;
  const int m = ctx.num_points();

  // memo[start]: best way to cover points [start..m-1]; keyed by the
  // bridging point exactly as the memoized path map in the paper algorithm.
  std::vector<std::optional<Suffix>> memo(m + 1);
  std::vector<char> visiting(m + 1, 0);

  auto solve = [&](auto&& self, int start) -> const std::optional<Suffix>& {
    if (memo[start]) return memo[start];
    assert(!visiting[start]);
    visiting[start] = 1;
    Suffix best;
    bool found = false;
    for (int vi : graph.by_start[start]) {
      const PartitionGraph::SpanVertex& v = graph.vertices[vi];
      Suffix cand;
      if (graph.is_leaf(v)) {
        cand.starts = {start};
      } else {
        const auto& rest = self(self, v.j + 1);
        if (!rest) continue;
        cand.cost_bytes = rest->cost_bytes + ctx.boundary_bytes[v.j];
        cand.starts.reserve(rest->starts.size() + 1);
        cand.starts.push_back(start);
        cand.starts.insert(cand.starts.end(), rest->starts.begin(),
                           rest->starts.end());
      }
      if (!found || better(cand, best)) best = std::move(cand), found = true;
    }
    visiting[start] = 0;
    memo[start] = found ? std::optional<Suffix>(std::move(best)) : std::nullopt;
    return memo[start];
  };

  const auto& sol = solve(solve, 0);
  if (!sol) throw InfeasibleError("infeasible: no feasible partitioning");

  PartitionPlan plan;
  const auto& starts = sol->starts;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    Partition part;
    part.span_begin = starts[s];
    part.span_end = (s + 1 < starts.size()) ? starts[s + 1] - 1 : m - 1;
    for (int k = part.span_begin; k <= part.span_end; ++k) {
      part.layer_ids.insert(part.layer_ids.end(), ctx.seg_layers[k].begin(),
                            ctx.seg_layers[k].end());
      part.mem_bytes += ctx.seg_mem[k];
    }
    part.boundary_point = ctx.points.points[part.span_end];
    part.transfer_bytes = ctx.transfer(part.span_end);
    plan.Q.push_back(part.boundary_point);
    plan.S.push_back(part.transfer_bytes);
    plan.partitions.push_back(std::move(part));
  }
  plan.total_cost = static_cast<double>(sol->cost_bytes) / ctx.lambda;
  return plan;
}

std::vector<int> classify_transfers(const std::vector<double>& S,
                                    int num_classes) {
  if (num_classes < 2) throw std::invalid_argument("num_classes must be >= 2");
  if (S.empty()) throw std::invalid_argument("S must be non-empty");
  std::vector<double> distinct(S);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const auto r = static_cast<long long>(distinct.size());
  std::vector<int> labels;
  labels.reserve(S.size());
  for (double v : S) {
    long long idx = std::lower_bound(distinct.begin(), distinct.end(), v) -
                    distinct.begin();
    labels.push_back(static_cast<int>(idx * num_classes / r));
  }
  return labels;
}

PartitionPlan plan_partition(const ModelDag& dag, double lambda,
                             std::uint64_t kappa, int num_classes) {
  CutPointList points = candidate_points(dag);
  PartitionContext ctx = make_partition_context(dag, points, lambda, kappa);
  PartitionGraph graph = build_partition_graph(ctx);
  PartitionPlan plan = min_cost_partition(graph);
  plan.num_classes = num_classes;
  plan.classes = classify_transfers(plan.S, num_classes);
  return plan;
}

}  // namespace edgepipe
