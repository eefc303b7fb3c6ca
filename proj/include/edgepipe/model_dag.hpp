#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace edgepipe {

/// One layer of a DNN computation graph. output_bytes is the uncompressed
/// activation size produced by the layer; param_bytes is the resident
/// weight/state footprint.
struct Layer {
  int id = 0;
  std::string name;
  std::uint64_t output_bytes = 0;
  std::uint64_t param_bytes = 0;

  friend bool operator==(const Layer&, const Layer&) = default;
};

/// Validated layer-level computation DAG with a single source and a single
/// sink. Immutable after construction; layer ids are dense 0..n-1 and double
/// as vertex indices.
class ModelDag {
 public:
  // Validates all invariants; throws std::runtime_error on cycle, multiple
  // sources/sinks, dangling edge ids, or a zero-output interior layer.
  static ModelDag create(std::vector<Layer> layers,
                         std::vector<std::pair<int, int>> edges);

  int size() const { return static_cast<int>(layers_.size()); }
  const std::vector<Layer>& layers() const { return layers_; }
  const Layer& layer(int id) const { return layers_[id]; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& out_edges(int id) const { return out_[id]; }
  const std::vector<int>& in_edges(int id) const { return in_[id]; }
  int source_id() const { return source_; }
  int sink_id() const { return sink_; }
  std::uint64_t total_param_bytes() const { return total_param_bytes_; }

  friend bool operator==(const ModelDag& a, const ModelDag& b) {
    return a.layers_ == b.layers_ && a.edges_ == b.edges_;
  }

 private:
  ModelDag() = default;
  std::vector<Layer> layers_;
  std::vector<std::pair<int, int>> edges_;  // sorted (src, dst)
  std::vector<std::vector<int>> out_, in_;
  int source_ = -1;
  int sink_ = -1;
  std::uint64_t total_param_bytes_ = 0;
};

enum class ModelFamily { kChain, kResidual, kInception, kNasnetLike };

ModelFamily model_family_from_string(const std::string& s);
std::string to_string(ModelFamily f);

/// Kahn's algorithm; ties between ready vertices broken by ascending id, so
/// the order is deterministic.
std::vector<int> topo_order(const ModelDag& dag);

ModelDag load_model(const std::string& path);
void write_model(const ModelDag& dag, const std::string& path);
std::string model_to_json(const ModelDag& dag);
ModelDag model_from_json(const std::string& text);

/// Deterministic synthetic fixtures. `blocks` counts repeated structural
/// units: chain emits exactly `blocks` layers; residual emits skip-connected
/// blocks that rejoin at an add layer; inception emits parallel branches that
/// rejoin at a concat layer; nasnet_like emits cross-block skip edges so that
/// no interior vertex is a candidate partition point.
ModelDag synth_model(ModelFamily family, int blocks, std::uint64_t seed);

}  // namespace edgepipe
