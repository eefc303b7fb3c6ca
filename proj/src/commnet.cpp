#include "edgepipe/commnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "edgepipe/rng.hpp"
#include "json.hpp"

namespace edgepipe {

using nlohmann::json;

double shannon_bandwidth(double x, double y, double a) {
  return std::log2(1.0 + a / (x * x + y * y));
}

namespace {

// Uniform over (-150, -1) u (1, 150): one draw over the combined measure,
// shifted past the excluded middle when it lands in the upper half.
double sample_coord(Rng& rng) {
  double v = -150.0 + rng.next_double() * 298.0;
  if (v >= -1.0) v += 2.0;
  return v;
}

}  // namespace

CommGraph gen_comm_graph(int n, std::uint64_t seed, std::uint64_t kappa_bytes) {
  if (n < 2) throw std::invalid_argument("need at least 2 nodes");
  CommGraph g;
  g.capacity_bytes = kappa_bytes;
  Rng rng(mix_seed(seed, 0x636f6d6dULL));
  std::vector<double> rate(n);
  for (int i = 0; i < n; ++i) {
    double x = sample_coord(rng);
    double y = sample_coord(rng);
    g.nodes.push_back({i, x, y});
    rate[i] = shannon_bandwidth(x, y);
  }
  g.bandwidth.assign(n, std::vector<double>(n, 0.0));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      g.bandwidth[u][v] = g.bandwidth[v][u] = std::min(rate[u], rate[v]);
  return g;
}

std::vector<double> CommGraph::distinct_weights_desc() const {
  // Non-positive entries mean "no edge"; hand-built sparse test graphs use 0.
  std::vector<double> w;
  for (int u = 0; u < size(); ++u)
    for (int v = u + 1; v < size(); ++v)
      if (bandwidth[u][v] > 0) w.push_back(bandwidth[u][v]);
  std::sort(w.begin(), w.end(), std::greater<>());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  return w;
}

double CommGraph::max_bandwidth() const {
  double m = 0;
  for (int u = 0; u < size(); ++u)
    for (int v = u + 1; v < size(); ++v) m = std::max(m, bandwidth[u][v]);
  return m;
}

EdgeClassing classify_edges(const CommGraph& g,
                            const std::vector<double>& thresholds) {
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    if (thresholds[i] >= thresholds[i - 1])
      throw std::invalid_argument("thresholds must be strictly descending");
  EdgeClassing out;
  out.threshold_per_class = thresholds;
  out.num_classes = static_cast<int>(thresholds.size()) + 1;
  const int n = g.size();
  out.class_of_edge.assign(n, std::vector<int>(n, 0));
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      int cls = 0;  // catch-all
      for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (g.bandwidth[u][v] >= thresholds[i]) {
          cls = out.num_classes - 1 - static_cast<int>(i);
          break;
        }
      }
      out.class_of_edge[u][v] = out.class_of_edge[v][u] = cls;
    }
  }
  return out;
}

std::vector<double> quantile_thresholds(const std::vector<double>& weights,
                                        int num_classes) {
  if (num_classes < 1) throw std::invalid_argument("num_classes must be >= 1");
  std::vector<double> distinct(weights);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const auto r = static_cast<long long>(distinct.size());
  std::vector<double> cutoffs;  // ascending chunk minima for classes 1..k-1
  for (int c = 1; c < num_classes; ++c) {
    // Smallest distinct index mapped to chunk c under floor(idx * k / r).
    long long idx = (static_cast<long long>(c) * r + num_classes - 1) /
                    num_classes;
    if (idx >= r) break;
    double t = distinct[idx];
    if (cutoffs.empty() || t > cutoffs.back()) cutoffs.push_back(t);
  }
  std::reverse(cutoffs.begin(), cutoffs.end());
  return cutoffs;
}

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string comm_graph_to_json(const CommGraph& g) {
  // Hand-rolled writer: Mbps and coordinates are serialized with exactly six
  // decimal places.
  std::ostringstream os;
  os << "{\n  \"nodes\": [\n";
  for (int i = 0; i < g.size(); ++i) {
    const auto& nd = g.nodes[i];
    os << "    {\"id\": " << nd.id << ", \"x\": " << fmt6(nd.x)
       << ", \"y\": " << fmt6(nd.y) << "}" << (i + 1 < g.size() ? "," : "")
       << "\n";
  }
  os << "  ],\n  \"bandwidth\": [\n";
  for (int u = 0; u < g.size(); ++u) {
    os << "    [";
    for (int v = 0; v < g.size(); ++v)
      os << fmt6(g.bandwidth[u][v]) << (v + 1 < g.size() ? ", " : "");
    os << "]" << (u + 1 < g.size() ? "," : "") << "\n";
  }
  os << "  ],\n  \"kappa_mb\": "
     << (g.capacity_bytes / (1024ull * 1024ull)) << "\n}\n";
  return os.str();
}

CommGraph comm_graph_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("network parse error: ") + e.what());
  }
  CommGraph g;
  try {
    for (const auto& jn : j.at("nodes"))
      g.nodes.push_back({jn.at("id").get<int>(), jn.at("x").get<double>(),
                         jn.at("y").get<double>()});
    g.bandwidth = j.at("bandwidth").get<std::vector<std::vector<double>>>();
    g.capacity_bytes = j.at("kappa_mb").get<std::uint64_t>() * 1024ull * 1024ull;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("network parse error: ") + e.what());
  }
  const int n = g.size();
  if (n < 2) throw std::runtime_error("network needs at least 2 nodes");
  if (static_cast<int>(g.bandwidth.size()) != n)
    throw std::runtime_error("bandwidth matrix size mismatch");
  for (int u = 0; u < n; ++u) {
    if (static_cast<int>(g.bandwidth[u].size()) != n)
      throw std::runtime_error("bandwidth matrix size mismatch");
    for (int v = 0; v < n; ++v) {
      if (u != v && g.bandwidth[u][v] <= 0)
        throw std::runtime_error("bandwidth must be positive for every pair");
      if (g.bandwidth[u][v] != g.bandwidth[v][u])
        throw std::runtime_error("bandwidth matrix must be symmetric");
    }
  }
  return g;
}

CommGraph load_comm_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open network file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return comm_graph_from_json(ss.str());
}

void write_comm_graph(const CommGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write network file: " + path);
  out << comm_graph_to_json(g);
}

}  // namespace edgepipe
