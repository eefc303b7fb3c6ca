#include "edgepipe/testgen.hpp"

#include <string>
#include <vector>

#include "edgepipe/rng.hpp"

namespace edgepipe {

ModelDag random_dag(int n, std::uint64_t seed, double extra_edge_prob) {
  Rng rng(mix_seed(seed, 0x646167ULL));
  std::vector<Layer> layers;
  for (int v = 0; v < n; ++v)
    layers.push_back(Layer{v, "v" + std::to_string(v),
                           1 + rng.next_below(1000), rng.next_below(1000)});
  std::vector<std::pair<int, int>> edges;
  // A spine edge into every vertex keeps the source unique...
  for (int v = 1; v < n; ++v)
    edges.emplace_back(static_cast<int>(rng.next_below(v)), v);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.next_double() < extra_edge_prob) edges.emplace_back(u, v);
  // ...and forwarding dead ends keeps the sink unique.
  std::vector<char> has_out(n, 0);
  for (const auto& e : edges) has_out[e.first] = 1;
  for (int v = 0; v < n - 1; ++v)
    if (!has_out[v])
      edges.emplace_back(v, v + 1 + static_cast<int>(rng.next_below(n - 1 - v)));
  return ModelDag::create(std::move(layers), std::move(edges));
}

CommGraph random_weighted_graph(int n, std::uint64_t seed, double edge_prob) {
  Rng rng(mix_seed(seed, 0x677261ULL));
  CommGraph g;
  g.capacity_bytes = 1ull << 30;
  for (int i = 0; i < n; ++i) g.nodes.push_back({i, 0.0, 0.0});
  g.bandwidth.assign(n, std::vector<double>(n, 0.0));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.next_double() < edge_prob)
        g.bandwidth[u][v] = g.bandwidth[v][u] = rng.uniform(1.0, 100.0);
  return g;
}

}  // namespace edgepipe
