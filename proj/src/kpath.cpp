#include "edgepipe/kpath.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "edgepipe/rng.hpp"

namespace edgepipe {

namespace {

constexpr int kMaxTrials = 100000;
constexpr int kMaxK = 20;  // colorset table is 2^k entries

int trial_budget(int k, double delta) {
  if (delta <= 0 || delta >= 1) throw std::invalid_argument("delta in (0,1)");
  double t = std::ceil(std::exp(static_cast<double>(k)) * std::log(1.0 / delta));
  return static_cast<int>(std::min(t, static_cast<double>(kMaxTrials)));
}

bool verify_path(const KPathQuery& q, const std::vector<int>& path) {
  if (static_cast<int>(path.size()) != q.k) return false;
  std::vector<char> seen(q.graph.n, 0);
  for (int v : path) {
    if (v < 0 || v >= q.graph.n || seen[v]) return false;
    seen[v] = 1;
  }
  for (std::size_t i = 1; i < path.size(); ++i)
    if (!q.graph.has_edge(path[i - 1], path[i])) return false;
  if (q.start && path.front() != *q.start) return false;
  if (q.end && path.back() != *q.end) return false;
  return true;
}

// Walk a completed DP state back to its seed. dp[S] holds the endpoints of
// colorful paths whose colors are exactly S.
std::vector<int> backtrack(const std::vector<NodeSet>& dp,
                           const std::vector<int>& color, const AdjGraph& g,
                           int v, unsigned s) {
  std::vector<int> rev{v};
  while (true) {
    unsigned prev_s = s & ~(1u << color[v]);
    if (prev_s == 0) break;
    NodeSet preds = dp[prev_s] & g.adj[v];
    int u = preds.first();
    assert(u >= 0);
    rev.push_back(u);
    v = u;
    s = prev_s;
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

}  // namespace

KPathResult find_k_path(const KPathQuery& q) {
  const AdjGraph& g = q.graph;
  const int n = g.n;
  const int k = q.k;
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (k > kMaxK) throw std::invalid_argument("k too large for color coding");
  if (q.start && q.end && *q.start == *q.end && k >= 2)
    throw std::invalid_argument("start and end must differ for k >= 2");

  KPathResult res;
  if (k > n) return res;

  if (k == 1) {
    int v = q.start ? *q.start : (q.end ? *q.end : 0);
    res.found = true;
    res.path = {v};
    return res;
  }
  if (k == 2) {
    // Exact: a 2-path is just an admissible edge.
    std::vector<int> path;
    if (q.start && q.end) {
      if (g.has_edge(*q.start, *q.end)) path = {*q.start, *q.end};
    } else if (q.start) {
      int v = g.adj[*q.start].first();
      if (v >= 0) path = {*q.start, v};
    } else if (q.end) {
      int v = g.adj[*q.end].first();
      if (v >= 0) path = {v, *q.end};
    } else {
      for (int u = 0; u < n && path.empty(); ++u) {
        int v = g.adj[u].first();
        if (v >= 0) path = {u, v};
      }
    }
    if (!path.empty()) {
      res.found = true;
      res.path = std::move(path);
    }
    return res;
  }

  const int trials = trial_budget(k, q.delta);
  const unsigned full = (1u << k) - 1;
  std::vector<NodeSet> dp(1u << k, NodeSet(n));
  std::vector<unsigned> touched;
  std::vector<int> color(n);
  std::vector<NodeSet> color_mask(k, NodeSet(n));

  // When the end vertex is fixed it may only appear as the final hop, so it
  // is kept out of the DP entirely and tested against k-1 states.
  const int end_v = q.end ? *q.end : -1;

  for (int trial = 0; trial < trials; ++trial) {
    res.trials_used = trial + 1;
    Rng rng(mix_seed(q.rng_seed, static_cast<std::uint64_t>(trial)));
    for (int v = 0; v < n; ++v) color[v] = static_cast<int>(rng.next_below(k));
    for (auto& m : color_mask) m.clear();
    for (int v = 0; v < n; ++v) color_mask[color[v]].set(v);
    for (unsigned s : touched) dp[s].clear();
    touched.clear();

    auto seed_state = [&](int v) {
      unsigned s = 1u << color[v];
      if (!dp[s].any()) touched.push_back(s);
      dp[s].set(v);
    };
    if (q.start) {
      seed_state(*q.start);
    } else {
      for (int v = 0; v < n; ++v)
        if (v != end_v) seed_state(v);
    }

    NodeSet ext(n);
    for (unsigned s = 1; s <= full; ++s) {
      if (!dp[s].any()) continue;
      int level = __builtin_popcount(s);
      if (q.end) {
        if (level == k - 1 && !(s & (1u << color[end_v]))) {
          NodeSet cand = dp[s] & g.adj[end_v];
          if (cand.any()) {
            auto body = backtrack(dp, color, g, cand.first(), s);
            body.push_back(end_v);
            res.found = true;
            res.path = std::move(body);
          }
        }
        if (level >= k - 1) continue;  // states past k-1 are dead weight
      } else if (level == k) {
        res.found = true;
        res.path = backtrack(dp, color, g, dp[s].first(), s);
      }
      if (res.found) break;

      ext.clear();
      dp[s].for_each([&](int v) { ext |= g.adj[v]; });
      if (q.end) ext.reset(end_v);
      for (int c = 0; c < k; ++c) {
        if (s & (1u << c)) continue;
        NodeSet step = ext & color_mask[c];
        if (!step.any()) continue;
        unsigned ns = s | (1u << c);
        if (!dp[ns].any()) touched.push_back(ns);
        dp[ns] |= step;
      }
    }
    if (res.found) break;
  }

  if (res.found && !verify_path(q, res.path))
    throw std::logic_error("color-coding produced an invalid path");
  return res;
}

namespace {

// Exact negative certificate: no component of the probe graph can host the
// requested path.
bool component_check(const AdjGraph& g, int k, std::optional<int> start,
                     std::optional<int> end) {
  const int n = g.n;
  std::vector<int> comp(n, -1);
  std::vector<int> comp_size;
  std::vector<int> stack;
  for (int v = 0; v < n; ++v) {
    if (comp[v] >= 0) continue;
    int id = static_cast<int>(comp_size.size());
    comp_size.push_back(0);
    stack.push_back(v);
    comp[v] = id;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      ++comp_size[id];
      g.adj[u].for_each([&](int w) {
        if (comp[w] < 0) {
          comp[w] = id;
          stack.push_back(w);
        }
      });
    }
  }
  if (start && end && comp[*start] != comp[*end]) return false;
  if (start) return comp_size[comp[*start]] >= k;
  if (end) return comp_size[comp[*end]] >= k;
  return std::any_of(comp_size.begin(), comp_size.end(),
                     [&](int s) { return s >= k; });
}

}  // namespace

SubgraphKPathResult subgraph_k_path(CommView& view, int k,
                                    std::optional<int> start,
                                    std::optional<int> end, double delta,
                                    std::uint64_t rng_seed) {
  const CommGraph& g = view.graph();
  SubgraphKPathResult res;

  // Usable nodes: the free pool plus the explicit anchors.
  std::vector<int> nodes;
  for (int v = 0; v < g.size(); ++v)
    if (view.alive(v) || (start && v == *start) || (end && v == *end))
      nodes.push_back(v);
  const int n = static_cast<int>(nodes.size());
  std::vector<int> local(g.size(), -1);
  for (int i = 0; i < n; ++i) local[nodes[i]] = i;

  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (k > n) return res;
  if (k == 1) {
    int v = start ? *start : (end ? *end : nodes.front());
    res.found = true;
    res.path = {v};
    view.erase(v);
    return res;
  }

  std::vector<double> edge_list;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (g.bw(nodes[i], nodes[j]) > 0)
        edge_list.push_back(g.bw(nodes[i], nodes[j]));
  std::sort(edge_list.begin(), edge_list.end(), std::greater<>());
  edge_list.erase(std::unique(edge_list.begin(), edge_list.end()),
                  edge_list.end());
  if (edge_list.empty()) return res;

  std::optional<int> lstart = start ? std::optional<int>(local[*start])
                                    : std::nullopt;
  std::optional<int> lend = end ? std::optional<int>(local[*end]) : std::nullopt;

  auto probe = [&](int idx) -> KPathResult {
    double t = edge_list[idx];
    AdjGraph sub(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (g.bw(nodes[i], nodes[j]) >= t) sub.add_edge(i, j);
    ++res.probes;
    if (!component_check(sub, k, lstart, lend)) return {};
    for (int attempt = 0; attempt < 2; ++attempt) {
      KPathQuery q{sub, k, lstart, lend, delta,
                   mix_seed(rng_seed, static_cast<std::uint64_t>(idx) * 2 +
                                          attempt)};
      KPathResult r = find_k_path(q);
      if (r.found) return r;
    }
    return {};
  };

  // Smallest index (= highest threshold) admitting a path.
  int low = 0, high = static_cast<int>(edge_list.size());
  std::vector<int> best_path;
  while (low < high) {
    int median = (low + high) / 2;
    KPathResult r = probe(median);
    if (!r.found) {
      low = median + 1;
    } else {
      high = median;
      best_path = std::move(r.path);
    }
  }
  if (low == static_cast<int>(edge_list.size())) return res;

  res.found = true;
  res.threshold = edge_list[low];
  res.path.reserve(best_path.size());
  for (int i : best_path) res.path.push_back(nodes[i]);
  for (int v : res.path) view.erase(v);
  return res;
}

}  // namespace edgepipe
