#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "edgepipe/cutpoints.hpp"
#include "edgepipe/harness.hpp"
#include "edgepipe/kpath.hpp"
#include "edgepipe/model_dag.hpp"
#include "edgepipe/oracles.hpp"
#include "edgepipe/partitioner.hpp"
#include "edgepipe/placement.hpp"

namespace py = pybind11;
using namespace edgepipe;

namespace {

// Python-friendly k-path entry: the graph comes in as an edge list.
KPathResult find_k_path_edges(int n, const std::vector<std::pair<int, int>>& edges,
                              int k, std::optional<int> start,
                              std::optional<int> end, double delta,
                              std::uint64_t seed) {
  AdjGraph g(n);
  for (const auto& [u, v] : edges) g.add_edge(u, v);
  return find_k_path(KPathQuery{std::move(g), k, start, end, delta, seed});
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "DNN pipeline partitioning and placement planner";

  py::register_exception<InfeasibleError>(m, "InfeasibleError");

  py::class_<Layer>(m, "Layer")
      .def(py::init<int, std::string, std::uint64_t, std::uint64_t>(),
           py::arg("id"), py::arg("name"), py::arg("output_bytes"),
           py::arg("param_bytes"))
      .def_readonly("id", &Layer::id)
      .def_readonly("name", &Layer::name)
      .def_readonly("output_bytes", &Layer::output_bytes)
      .def_readonly("param_bytes", &Layer::param_bytes)
      .def("__repr__", [](const Layer& l) {
        return "Layer(id=" + std::to_string(l.id) + ", name='" + l.name + "')";
      });

  py::class_<ModelDag>(m, "ModelDag")
      .def_static("create", &ModelDag::create, py::arg("layers"),
                  py::arg("edges"))
      .def_property_readonly("layers", &ModelDag::layers)
      .def_property_readonly("edges", &ModelDag::edges)
      .def_property_readonly("source_id", &ModelDag::source_id)
      .def_property_readonly("sink_id", &ModelDag::sink_id)
      .def_property_readonly("total_param_bytes", &ModelDag::total_param_bytes)
      .def("__len__", &ModelDag::size);

  m.def("load_model", &load_model, py::arg("path"));
  m.def("write_model", &write_model, py::arg("dag"), py::arg("path"));
  m.def("model_to_json", &model_to_json);
  m.def("model_from_json", &model_from_json);
  m.def(
      "synth_model",
      [](const std::string& family, int blocks, std::uint64_t seed) {
        return synth_model(model_family_from_string(family), blocks, seed);
      },
      py::arg("family"), py::arg("blocks"), py::arg("seed"));
  m.def("topo_order", &topo_order, py::arg("dag"));

  py::class_<CutPointList>(m, "CutPointList")
      .def_readonly("points", &CutPointList::points)
      .def_readonly("depths", &CutPointList::depths);
  m.def("longest_path_depths", &longest_path_depths, py::arg("dag"));
  m.def("all_paths_through", &all_paths_through, py::arg("dag"),
        py::arg("v_prev"), py::arg("v"));
  m.def("candidate_points", &candidate_points, py::arg("dag"));
  m.def("oracle_candidate_points", &oracle_candidate_points, py::arg("dag"));

  py::class_<Partition>(m, "Partition")
      .def_readonly("span_begin", &Partition::span_begin)
      .def_readonly("span_end", &Partition::span_end)
      .def_readonly("layer_ids", &Partition::layer_ids)
      .def_readonly("mem_bytes", &Partition::mem_bytes)
      .def_readonly("boundary_point", &Partition::boundary_point)
      .def_readonly("transfer_bytes", &Partition::transfer_bytes);

  py::class_<PartitionPlan>(m, "PartitionPlan")
      .def_readonly("partitions", &PartitionPlan::partitions)
      .def_readonly("Q", &PartitionPlan::Q)
      .def_readonly("S", &PartitionPlan::S)
      .def_readonly("classes", &PartitionPlan::classes)
      .def_readonly("num_classes", &PartitionPlan::num_classes)
      .def_readonly("total_cost", &PartitionPlan::total_cost)
      .def("hop_sizes", &PartitionPlan::hop_sizes);

  m.def("transfer_size", &transfer_size, py::arg("layer"),
        py::arg("lambda_") = kDefaultLambda);
  m.def("classify_transfers", &classify_transfers, py::arg("sizes"),
        py::arg("num_classes"));
  m.def(
      "plan_partition",
      [](const ModelDag& dag, std::uint64_t kappa, double lambda,
         int num_classes) {
        return plan_partition(dag, lambda, kappa, num_classes);
      },
      py::arg("dag"), py::arg("kappa"), py::arg("lambda_") = kDefaultLambda,
      py::arg("num_classes") = 3);

  py::class_<CommGraph::Node>(m, "CommNode")
      .def_readonly("id", &CommGraph::Node::id)
      .def_readonly("x", &CommGraph::Node::x)
      .def_readonly("y", &CommGraph::Node::y);

  py::class_<CommGraph>(m, "CommGraph")
      .def_readonly("nodes", &CommGraph::nodes)
      .def_readonly("bandwidth", &CommGraph::bandwidth)
      .def_readonly("capacity_bytes", &CommGraph::capacity_bytes)
      .def("__len__", &CommGraph::size)
      .def("bw", &CommGraph::bw, py::arg("u"), py::arg("v"))
      .def("max_bandwidth", &CommGraph::max_bandwidth);

  m.def("shannon_bandwidth", &shannon_bandwidth, py::arg("x"), py::arg("y"),
        py::arg("a") = kShannonA);
  m.def("gen_comm_graph", &gen_comm_graph, py::arg("n"), py::arg("seed"),
        py::arg("kappa_bytes"));
  m.def("load_comm_graph", &load_comm_graph, py::arg("path"));
  m.def("write_comm_graph", &write_comm_graph, py::arg("g"), py::arg("path"));
  m.def("comm_graph_to_json", &comm_graph_to_json);
  m.def("comm_graph_from_json", &comm_graph_from_json);

  py::class_<EdgeClassing>(m, "EdgeClassing")
      .def_readonly("threshold_per_class", &EdgeClassing::threshold_per_class)
      .def_readonly("class_of_edge", &EdgeClassing::class_of_edge)
      .def_readonly("num_classes", &EdgeClassing::num_classes);
  m.def("classify_edges", &classify_edges, py::arg("g"), py::arg("thresholds"));
  m.def("quantile_thresholds", &quantile_thresholds, py::arg("weights"),
        py::arg("num_classes"));

  py::class_<KPathResult>(m, "KPathResult")
      .def_readonly("found", &KPathResult::found)
      .def_readonly("path", &KPathResult::path)
      .def_readonly("trials_used", &KPathResult::trials_used);
  m.def("find_k_path", &find_k_path_edges, py::arg("n"), py::arg("edges"),
        py::arg("k"), py::arg("start") = std::nullopt,
        py::arg("end") = std::nullopt, py::arg("delta") = 0.01,
        py::arg("seed") = 0);

  py::class_<Placement>(m, "Placement")
      .def_readonly("node_path", &Placement::node_path)
      .def_readonly("hop_latencies", &Placement::hop_latencies)
      .def_readonly("bottleneck", &Placement::bottleneck);

  py::class_<PlacementReport>(m, "PlacementReport")
      .def_readonly("plan", &PlacementReport::plan)
      .def_readonly("placement", &PlacementReport::placement)
      .def_readonly("bound", &PlacementReport::bound)
      .def_readonly("ratio", &PlacementReport::ratio)
      .def_readonly("classes_used", &PlacementReport::classes_used)
      .def_readonly("retried", &PlacementReport::retried);

  m.def("latency_s", &latency_s, py::arg("transfer_bytes"),
        py::arg("bandwidth_mbps"));
  m.def("theorem1_bound", &theorem1_bound, py::arg("hop_sizes"), py::arg("g"));
  m.def("place_optimal", &place_optimal, py::arg("plan"), py::arg("g"),
        py::arg("num_classes"), py::arg("seed"));
  m.def(
      "place_random",
      [](const ModelDag& dag, const CommGraph& g, double lambda,
         std::uint64_t seed) {
        PartitionContext ctx = make_partition_context(
            dag, candidate_points(dag), lambda, g.capacity_bytes);
        return random_placement(ctx, g, seed);
      },
      py::arg("dag"), py::arg("g"), py::arg("lambda_") = kDefaultLambda,
      py::arg("seed") = 0);
  m.def(
      "place_joint",
      [](const ModelDag& dag, const CommGraph& g, double lambda) {
        PartitionContext ctx = make_partition_context(
            dag, candidate_points(dag), lambda, g.capacity_bytes);
        return joint_placement(ctx, g);
      },
      py::arg("dag"), py::arg("g"), py::arg("lambda_") = kDefaultLambda);

  m.def(
      "run_sweep_csv",
      [](const std::string& config_json, int threads) {
        ExperimentConfig cfg = config_json.empty()
                                   ? ExperimentConfig{}
                                   : config_from_json(config_json);
        return records_to_csv(run_sweep(cfg, threads));
      },
      py::arg("config_json") = std::string(), py::arg("threads") = 1);
  m.def(
      "run_sweep_summary_csv",
      [](const std::string& config_json, int threads) {
        ExperimentConfig cfg = config_json.empty()
                                   ? ExperimentConfig{}
                                   : config_from_json(config_json);
        return summary_to_csv(summarize(run_sweep(cfg, threads)));
      },
      py::arg("config_json") = std::string(), py::arg("threads") = 1);

  m.attr("DEFAULT_LAMBDA") = kDefaultLambda;
  m.attr("SHANNON_A") = kShannonA;
}
