#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace edgepipe {

/// Shannon-capacity constant calibrated so that a node 80 m from the router
/// sees 5.5 Mbps.
constexpr double kShannonA = 283230.0;

/// Complete weighted graph of edge nodes. Bandwidth is symmetric Mbps;
/// the diagonal is unused. Node capacity is homogeneous.
struct CommGraph {
  struct Node {
    int id = 0;
    double x = 0, y = 0;  // meters from the router at the origin
  };
  std::vector<Node> nodes;
  std::vector<std::vector<double>> bandwidth;
  std::uint64_t capacity_bytes = 0;

  int size() const { return static_cast<int>(nodes.size()); }
  double bw(int u, int v) const { return bandwidth[u][v]; }
  /// Distinct edge weights across all unordered pairs, descending.
  std::vector<double> distinct_weights_desc() const;
  double max_bandwidth() const;
};

/// r(x, y) = log2(1 + a / (x^2 + y^2)), in Mbps.
double shannon_bandwidth(double x, double y, double a = kShannonA);

/// Positions drawn i.i.d. per coordinate, uniform over (-150,-1) u (1,150).
/// Pairwise bandwidth is the min of the two endpoints' rates to the router,
/// since infrastructure WiFi relays through it.
CommGraph gen_comm_graph(int n, std::uint64_t seed, std::uint64_t kappa_bytes);

/// Edge-to-class assignment under a descending threshold list: an edge gets
/// the highest class whose cutoff it meets (>=); class 0 is the catch-all.
struct EdgeClassing {
  std::vector<double> threshold_per_class;       // descending cutoffs
  std::vector<std::vector<int>> class_of_edge;   // matrix, diagonal unused
  int num_classes = 1;
};

EdgeClassing classify_edges(const CommGraph& g,
                            const std::vector<double>& thresholds);

/// Descending class cutoffs from equal-frequency chunks of the distinct
/// weights; duplicates collapse, so the result may be shorter than
/// num_classes - 1 when there are few distinct weights.
std::vector<double> quantile_thresholds(const std::vector<double>& weights,
                                        int num_classes);

CommGraph load_comm_graph(const std::string& path);
std::string comm_graph_to_json(const CommGraph& g);
CommGraph comm_graph_from_json(const std::string& text);
void write_comm_graph(const CommGraph& g, const std::string& path);

}  // namespace edgepipe
