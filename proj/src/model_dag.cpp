#include "edgepipe/model_dag.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <functional>

#include "edgepipe/rng.hpp"
#include "json.hpp"

namespace edgepipe {

using nlohmann::json;

ModelDag ModelDag::create(std::vector<Layer> layers,
                          std::vector<std::pair<int, int>> edges) {
  const int n = static_cast<int>(layers.size());
  if (n == 0) throw std::runtime_error("model has no layers");

  std::sort(layers.begin(), layers.end(),
            [](const Layer& a, const Layer& b) { return a.id < b.id; });
  for (int i = 0; i < n; ++i) {
    if (layers[i].id != i)
      throw std::runtime_error("layer ids must be dense integers from 0");
  }

  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  ModelDag dag;
  dag.layers_ = std::move(layers);
  dag.edges_ = std::move(edges);
  dag.out_.resize(n);
  dag.in_.resize(n);
  for (const auto& [u, v] : dag.edges_) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::runtime_error("dangling edge id: (" + std::to_string(u) +
                               ", " + std::to_string(v) + ")");
    if (u == v) throw std::runtime_error("cycle detected: self-loop at layer " +
                                         std::to_string(u));
    dag.out_[u].push_back(v);
    dag.in_[v].push_back(u);
  }

  // Kahn's algorithm doubles as the cycle check.
  std::vector<int> indeg(n);
  for (int v = 0; v < n; ++v) indeg[v] = static_cast<int>(dag.in_[v].size());
  std::vector<int> stack;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) stack.push_back(v);
  int seen = 0;
  std::vector<int> work = stack;
  while (!work.empty()) {
    int u = work.back();
    work.pop_back();
    ++seen;
    for (int v : dag.out_[u])
      if (--indeg[v] == 0) work.push_back(v);
  }
  if (seen != n) throw std::runtime_error("cycle detected");

  int sources = 0, sinks = 0;
  for (int v = 0; v < n; ++v) {
    if (dag.in_[v].empty()) {
      ++sources;
      dag.source_ = v;
    }
    if (dag.out_[v].empty()) {
      ++sinks;
      dag.sink_ = v;
    }
  }
  if (sources != 1)
    throw std::runtime_error("expected exactly one source vertex, found " +
                             std::to_string(sources));
  if (sinks != 1)
    throw std::runtime_error("expected exactly one sink vertex, found " +
                             std::to_string(sinks));
  // Acyclic + single source/sink already implies every vertex is reachable
  // from the source and reaches the sink.

  for (int v = 0; v < n; ++v) {
    if (!dag.out_[v].empty() && dag.layers_[v].output_bytes == 0)
      throw std::runtime_error("layer " + std::to_string(v) +
                               " has outgoing edges but zero output_bytes");
    dag.total_param_bytes_ += dag.layers_[v].param_bytes;
  }
  return dag;
}

std::vector<int> topo_order(const ModelDag& dag) {
  const int n = dag.size();
  std::vector<int> indeg(n);
  for (int v = 0; v < n; ++v) indeg[v] = static_cast<int>(dag.in_edges(v).size());
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push(v);
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    int u = ready.top();
    ready.pop();
    order.push_back(u);
    for (int v : dag.out_edges(u))
      if (--indeg[v] == 0) ready.push(v);
  }
  return order;
}

ModelFamily model_family_from_string(const std::string& s) {
  if (s == "chain") return ModelFamily::kChain;
  if (s == "residual") return ModelFamily::kResidual;
  if (s == "inception") return ModelFamily::kInception;
  if (s == "nasnet_like") return ModelFamily::kNasnetLike;
  throw std::invalid_argument("unknown model family: " + s);
}

std::string to_string(ModelFamily f) {
  switch (f) {
    case ModelFamily::kChain: return "chain";
    case ModelFamily::kResidual: return "residual";
    case ModelFamily::kInception: return "inception";
    case ModelFamily::kNasnetLike: return "nasnet_like";
  }
  return "?";
}

ModelDag model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("model parse error: ") + e.what());
  }
  std::vector<Layer> layers;
  std::vector<std::pair<int, int>> edges;
  try {
    for (const auto& jl : j.at("layers")) {
      Layer l;
      l.id = jl.at("id").get<int>();
      l.name = jl.at("name").get<std::string>();
      l.output_bytes = jl.at("output_bytes").get<std::uint64_t>();
      l.param_bytes = jl.at("param_bytes").get<std::uint64_t>();
      layers.push_back(std::move(l));
    }
    for (const auto& je : j.at("edges"))
      edges.emplace_back(je.at(0).get<int>(), je.at(1).get<int>());
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("model parse error: ") + e.what());
  }
  return ModelDag::create(std::move(layers), std::move(edges));
}

std::string model_to_json(const ModelDag& dag) {
  json j;
  j["layers"] = json::array();
  for (const Layer& l : dag.layers()) {
    j["layers"].push_back({{"id", l.id},
                           {"name", l.name},
                           {"output_bytes", l.output_bytes},
                           {"param_bytes", l.param_bytes}});
  }
  j["edges"] = json::array();
  for (const auto& [u, v] : dag.edges()) j["edges"].push_back({u, v});
  return j.dump(2) + "\n";
}

ModelDag load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

void write_model(const ModelDag& dag, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << model_to_json(dag);
}

namespace {

constexpr double kMiB = 1024.0 * 1024.0;

struct Builder {
  std::vector<Layer> layers;
  std::vector<std::pair<int, int>> edges;
  Rng rng;

  Builder(std::uint64_t seed) : rng(seed) {}

  // Activation sizes span roughly two decades around the ~1.3 MB the paper
  // reports as a typical inter-layer transfer.
  std::uint64_t act() {
    return static_cast<std::uint64_t>(rng.log_uniform(1.5e5, 8e6));
  }
  std::uint64_t params(double lo_mib, double hi_mib) {
    return static_cast<std::uint64_t>(rng.uniform(lo_mib * kMiB, hi_mib * kMiB));
  }

  int add(const std::string& name, std::uint64_t out_bytes,
          std::uint64_t param_bytes) {
    int id = static_cast<int>(layers.size());
    layers.push_back(Layer{id, name, out_bytes, param_bytes});
    return id;
  }
  void link(int u, int v) { edges.emplace_back(u, v); }
};

}  // namespace

ModelDag synth_model(ModelFamily family, int blocks, std::uint64_t seed) {
  if (blocks < 1) throw std::invalid_argument("blocks must be >= 1");
  Builder b(mix_seed(mix_seed(seed, static_cast<std::uint64_t>(family) + 1),
                     static_cast<std::uint64_t>(blocks)));

  switch (family) {
    case ModelFamily::kChain: {
      int prev = b.add("layer_0", b.act(), b.params(0.5, 2.0));
      for (int i = 1; i < blocks; ++i) {
        int cur = b.add("layer_" + std::to_string(i), b.act(), b.params(0.5, 2.0));
        b.link(prev, cur);
        prev = cur;
      }
      break;
    }
    case ModelFamily::kResidual: {
      // Stem, then per block a two-layer conv path plus a skip edge rejoining
      // at an add layer, then a transition layer. The joins and transitions
      // are the partitionable vertices.
      int prev = b.add("input", b.act(), b.params(1.0, 1.8));
      int stem = b.add("stem_conv", b.act(), b.params(1.0, 1.8));
      b.link(prev, stem);
      prev = stem;
      for (int k = 0; k < blocks; ++k) {
        std::string p = "block" + std::to_string(k) + "_";
        int c1 = b.add(p + "conv1", b.act(), b.params(1.0, 1.8));
        int c2 = b.add(p + "conv2", b.act(), b.params(1.0, 1.8));
        int add = b.add(p + "add", b.act(), b.params(1.0, 1.8));
        b.link(prev, c1);
        b.link(c1, c2);
        b.link(c2, add);
        b.link(prev, add);  // skip connection
        int trans = b.add(p + "trans", b.act(), b.params(1.0, 1.8));
        b.link(add, trans);
        prev = trans;
      }
      int head = b.add("classifier", b.act(), b.params(1.0, 1.8));
      b.link(prev, head);
      break;
    }
    case ModelFamily::kInception: {
      // Per block, three parallel branches of depth 1/2/2 rejoining at a
      // concat layer, then a transition layer.
      int prev = b.add("input", b.act(), b.params(1.6, 1.85));
      int stem = b.add("stem_conv", b.act(), b.params(1.6, 1.85));
      b.link(prev, stem);
      prev = stem;
      for (int k = 0; k < blocks; ++k) {
        std::string p = "block" + std::to_string(k) + "_";
        int a1 = b.add(p + "b0_conv", b.act(), b.params(1.6, 1.85));
        int b1 = b.add(p + "b1_conv1", b.act(), b.params(1.6, 1.85));
        int b2 = b.add(p + "b1_conv2", b.act(), b.params(1.6, 1.85));
        int c1 = b.add(p + "b2_conv1", b.act(), b.params(1.6, 1.85));
        int c2 = b.add(p + "b2_conv2", b.act(), b.params(1.6, 1.85));
        int cat = b.add(p + "concat", b.act(), b.params(1.6, 1.85));
        b.link(prev, a1);
        b.link(prev, b1);
        b.link(b1, b2);
        b.link(prev, c1);
        b.link(c1, c2);
        b.link(a1, cat);
        b.link(b2, cat);
        b.link(c2, cat);
        int trans = b.add(p + "trans", b.act(), b.params(1.6, 1.85));
        b.link(cat, trans);
        prev = trans;
      }
      int head = b.add("classifier", b.act(), b.params(1.6, 1.85));
      b.link(prev, head);
      break;
    }
    case ModelFamily::kNasnetLike: {
      // Cells with skip edges from two blocks back, so every interior cell is
      // bypassed by an edge jumping over it and no interior vertex can be a
      // partition point.
      int stem = b.add("stem", b.act(), b.params(0.5, 2.0));
      std::vector<int> cells{stem};
      for (int k = 0; k < blocks; ++k) {
        int cell = b.add("cell_" + std::to_string(k), b.act(), b.params(0.5, 2.0));
        b.link(cells.back(), cell);
        if (cells.size() >= 2) b.link(cells[cells.size() - 2], cell);
        cells.push_back(cell);
      }
      int head = b.add("head", b.act(), b.params(0.5, 2.0));
      b.link(cells.back(), head);
      if (cells.size() >= 2) b.link(cells[cells.size() - 2], head);
      break;
    }
  }
  return ModelDag::create(std::move(b.layers), std::move(b.edges));
}

}  // namespace edgepipe
