#include "edgepipe/placement.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "edgepipe/rng.hpp"

namespace edgepipe {

double latency_s(double transfer_bytes, double bandwidth_mbps) {
  if (bandwidth_mbps <= 0) throw std::invalid_argument("bandwidth must be > 0");
  return (transfer_bytes * 8.0 / 1e6) / bandwidth_mbps;
}

double theorem1_bound(const std::vector<double>& hop_sizes,
                      const CommGraph& g) {
  if (hop_sizes.empty()) return 0.0;
  double max_s = *std::max_element(hop_sizes.begin(), hop_sizes.end());
  return latency_s(max_s, g.max_bandwidth());
}

namespace {

// Hop latencies and bottleneck always come from the raw transfer sizes and
// raw bandwidths; classes never enter the score.
Placement score_path(const std::vector<int>& node_path,
                     const std::vector<double>& hop_sizes,
                     const CommGraph& g) {
  assert(node_path.size() == hop_sizes.size() + 1);
  Placement p;
  p.node_path = node_path;
  for (std::size_t k = 0; k < hop_sizes.size(); ++k) {
    p.hop_latencies.push_back(
        latency_s(hop_sizes[k], g.bw(node_path[k], node_path[k + 1])));
    p.bottleneck = std::max(p.bottleneck, p.hop_latencies.back());
  }
  return p;
}

PlacementReport make_report(PartitionPlan plan, Placement placement,
                            const CommGraph& g) {
  PlacementReport r;
  r.bound = theorem1_bound(plan.hop_sizes(), g);
  r.placement = std::move(placement);
  r.plan = std::move(plan);
  r.ratio = r.bound > 0 ? r.placement.bottleneck / r.bound : 1.0;
  return r;
}

struct Run {
  int label = 0;
  int begin = 0;  // first hop index
  int len = 0;    // number of hops
};

}  // namespace

std::optional<Placement> k_path_matching(const PartitionPlan& plan,
                                         const CommGraph& g, int num_classes,
                                         std::uint64_t rng_seed) {
  const int parts = static_cast<int>(plan.partitions.size());
  if (parts > g.size())
    throw std::invalid_argument("more partitions than nodes");
  const std::vector<double> hops = plan.hop_sizes();

  if (hops.empty()) {
    Placement p;
    p.node_path = {0};
    return p;
  }

  // The number of transfer-size classes always equals the number of
  // bandwidth classes; both shrink together when few distinct weights exist.
  std::vector<double> cutoffs =
      quantile_thresholds(g.distinct_weights_desc(), num_classes);
  int eff_classes = static_cast<int>(cutoffs.size()) + 1;
  std::vector<int> labels(hops.size(), 0);
  if (eff_classes >= 2) labels = classify_transfers(hops, eff_classes);

  std::vector<Run> runs;
  for (std::size_t i = 0; i < hops.size();) {
    std::size_t j = i;
    while (j + 1 < hops.size() && labels[j + 1] == labels[i]) ++j;
    runs.push_back({labels[i], static_cast<int>(i), static_cast<int>(j - i + 1)});
    i = j + 1;
  }
  std::stable_sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) {
    if (a.label != b.label) return a.label > b.label;
    if (a.len != b.len) return a.len > b.len;
    return a.begin < b.begin;
  });

  CommView view(g);
  std::vector<int> slots(parts, -1);
  std::uint64_t seq = 0;
  for (const Run& run : runs) {
    std::optional<int> start, end;
    if (slots[run.begin] >= 0) start = slots[run.begin];
    if (slots[run.begin + run.len] >= 0) end = slots[run.begin + run.len];
    SubgraphKPathResult r =
        subgraph_k_path(view, run.len + 1, start, end, 0.01,
                        mix_seed(rng_seed, ++seq));
    if (!r.found) return std::nullopt;
    for (int i = 0; i <= run.len; ++i) slots[run.begin + i] = r.path[i];
  }

  for (int s : slots) assert(s >= 0);
  assert([&] {
    std::vector<int> sorted = slots;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  }());
  return score_path(slots, hops, g);
}

PlacementReport place_optimal(const PartitionPlan& plan, const CommGraph& g,
                              int num_classes, std::uint64_t rng_seed) {
  int classes = std::max(1, num_classes);
  bool retried = false;
  while (true) {
    std::optional<Placement> p = k_path_matching(plan, g, classes, rng_seed);
    if (p) {
      PlacementReport r = make_report(plan, std::move(*p), g);
      r.classes_used = classes;
      r.retried = retried;
      return r;
    }
    if (classes == 1)
      throw std::runtime_error("matching failed with a single class");
    classes = std::max(1, classes - 3);
    retried = true;
  }
}

namespace {

// Largest span end j such that points [pos..j] fit a node; -1 when even the
// single segment at pos does not fit.
int max_feasible_end(const PartitionContext& ctx, int pos) {
  std::uint64_t mem = 0;
  int best = -1;
  for (int j = pos; j < ctx.num_points(); ++j) {
    mem += ctx.seg_mem[j];
    if (mem >= ctx.kappa) break;
    best = j;
  }
  return best;
}

PartitionPlan plan_from_spans(const PartitionContext& ctx,
                              const std::vector<std::pair<int, int>>& spans) {
  PartitionPlan plan;
  for (const auto& [i, j] : spans) {
    Partition part;
    part.span_begin = i;
    part.span_end = j;
    for (int k = i; k <= j; ++k) {
      part.layer_ids.insert(part.layer_ids.end(), ctx.seg_layers[k].begin(),
                            ctx.seg_layers[k].end());
      part.mem_bytes += ctx.seg_mem[k];
    }
    part.boundary_point = ctx.points.points[j];
    part.transfer_bytes = ctx.transfer(j);
    plan.Q.push_back(part.boundary_point);
    plan.S.push_back(part.transfer_bytes);
    plan.partitions.push_back(std::move(part));
  }
  for (std::size_t i = 0; i + 1 < plan.S.size(); ++i)
    plan.total_cost += plan.S[i];
  return plan;
}

}  // namespace

std::optional<PlacementReport> random_placement(const PartitionContext& ctx,
                                                const CommGraph& g,
                                                std::uint64_t rng_seed) {
  const int m = ctx.num_points();
  Rng rng(mix_seed(rng_seed, 0x72616e64ULL));

  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<int> unused(g.size());
    for (int i = 0; i < g.size(); ++i) unused[i] = i;
    std::vector<std::pair<int, int>> spans;
    std::vector<int> path;
    int pos = 0;
    bool dead = false;
    while (pos < m) {
      if (unused.empty()) {
        dead = true;
        break;
      }
      int pick = static_cast<int>(rng.next_below(unused.size()));
      int node = unused[pick];
      unused.erase(unused.begin() + pick);
      int jmax = max_feasible_end(ctx, pos);
      if (jmax < pos) {
        dead = true;
        break;
      }
      int j = pos + static_cast<int>(rng.next_below(jmax - pos + 1));
      spans.emplace_back(pos, j);
      path.push_back(node);
      pos = j + 1;
    }
    if (dead) continue;
    PartitionPlan plan = plan_from_spans(ctx, spans);
    Placement placed = score_path(path, plan.hop_sizes(), g);
    return make_report(std::move(plan), std::move(placed), g);
  }
  return std::nullopt;
}

std::optional<PlacementReport> joint_placement(const PartitionContext& ctx,
                                               const CommGraph& g) {
  const int m = ctx.num_points();

  // The greedy span choice is independent of the start node: at each step
  // take the feasible extension with the smallest boundary transfer.
  std::vector<std::pair<int, int>> spans;
  int pos = 0;
  while (pos < m) {
    int jmax = max_feasible_end(ctx, pos);
    if (jmax < pos) return std::nullopt;
    int best = pos;
    for (int j = pos; j <= jmax; ++j)
      if (ctx.boundary_bytes[j] < ctx.boundary_bytes[best]) best = j;
    spans.emplace_back(pos, best);
    pos = best + 1;
  }
  if (static_cast<int>(spans.size()) > g.size()) return std::nullopt;

  PartitionPlan plan = plan_from_spans(ctx, spans);
  const std::vector<double> hops = plan.hop_sizes();

  std::optional<Placement> best;
  for (int start = 0; start < g.size(); ++start) {
    std::vector<int> path{start};
    std::vector<char> used(g.size(), 0);
    used[start] = 1;
    int cur = start;
    for (std::size_t h = 0; h < hops.size(); ++h) {
      int next = -1;
      for (int v = 0; v < g.size(); ++v)
        if (!used[v] && (next < 0 || g.bw(cur, v) > g.bw(cur, next))) next = v;
      assert(next >= 0);
      used[next] = 1;
      path.push_back(next);
      cur = next;
    }
    Placement p = score_path(path, hops, g);
    if (!best || p.bottleneck < best->bottleneck) best = std::move(p);
  }
  return make_report(std::move(plan), std::move(*best), g);
}

}  // namespace edgepipe
