#include "edgepipe/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "edgepipe/cutpoints.hpp"
#include "edgepipe/partitioner.hpp"
#include "edgepipe/placement.hpp"
#include "edgepipe/rng.hpp"
#include "json.hpp"

namespace edgepipe {

using nlohmann::json;

std::string to_string(Algo a) {
  switch (a) {
    case Algo::kOptimal: return "optimal";
    case Algo::kRandom: return "random";
    case Algo::kJoint: return "joint";
  }
  return "?";
}

std::string to_string(TrialStatus s) {
  switch (s) {
    case TrialStatus::kOk: return "ok";
    case TrialStatus::kInfeasible: return "infeasible";
    case TrialStatus::kMatchingFailedRetried: return "matching_failed_retried";
  }
  return "?";
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  if (j.contains("models")) {
    cfg.models.clear();
    for (const auto& jm : j.at("models")) {
      FixtureSpec spec;
      spec.name = jm.at("name").get<std::string>();
      spec.family = model_family_from_string(jm.at("family").get<std::string>());
      spec.blocks = jm.at("blocks").get<int>();
      spec.seed = jm.value("seed", 0ull);
      cfg.models.push_back(std::move(spec));
    }
  }
  if (j.contains("node_counts"))
    cfg.node_counts = j.at("node_counts").get<std::vector<int>>();
  if (j.contains("class_counts"))
    cfg.class_counts = j.at("class_counts").get<std::vector<int>>();
  if (j.contains("capacities_mb"))
    cfg.capacities_mb = j.at("capacities_mb").get<std::vector<int>>();
  if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
  if (j.contains("base_seed")) cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("lambda")) cfg.lambda = j.at("lambda").get<double>();
  if (cfg.trials < 1) throw std::runtime_error("trials must be >= 1");
  if (cfg.models.empty()) throw std::runtime_error("config needs models");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

namespace {

constexpr std::uint64_t kMiB = 1024ull * 1024ull;

std::uint64_t string_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  return h;
}

struct ModelState {
  ModelDag dag;
  CutPointList points;
};

// Per (model, capacity): the partition context and the optimal plan, or the
// reason there is none.
struct PlanState {
  bool feasible = false;
  PartitionContext ctx;
  PartitionPlan plan;
};

struct Task {
  int model = 0, capacity_mb = 0, nodes = 0, classes = 0, trial = 0;
  std::uint64_t seed = 0;
};

TrialRecord base_record(const ExperimentConfig& cfg, const Task& t, Algo algo) {
  TrialRecord r;
  r.model = cfg.models[t.model].name;
  r.capacity_mb = t.capacity_mb;
  r.nodes = t.nodes;
  r.classes = t.classes;
  r.algo = algo;
  r.trial = t.trial;
  r.status = TrialStatus::kInfeasible;
  return r;
}

void fill_ok(TrialRecord& r, const PlacementReport& rep) {
  r.beta_s = rep.placement.bottleneck;
  r.bound_s = rep.bound;
  r.ratio = rep.ratio;
  r.partitions = static_cast<int>(rep.plan.partitions.size());
  r.status = rep.retried ? TrialStatus::kMatchingFailedRetried
                         : TrialStatus::kOk;
}

}  // namespace

std::vector<TrialRecord> run_sweep(const ExperimentConfig& cfg, int threads) {
  std::vector<ModelState> models;
  for (const FixtureSpec& spec : cfg.models) {
    ModelState st{synth_model(spec.family, spec.blocks, spec.seed), {}};
    st.points = candidate_points(st.dag);
    models.push_back(std::move(st));
  }

  std::map<std::pair<int, int>, PlanState> plans;  // (model, capacity_mb)
  for (int mi = 0; mi < static_cast<int>(models.size()); ++mi) {
    for (int cap : cfg.capacities_mb) {
      PlanState ps;
      ps.ctx = make_partition_context(models[mi].dag, models[mi].points,
                                      cfg.lambda, cap * kMiB);
      try {
        PartitionGraph graph = build_partition_graph(ps.ctx);
        ps.plan = min_cost_partition(graph);
        ps.feasible = true;
      } catch (const InfeasibleError&) {
        ps.feasible = false;
      }
      plans.emplace(std::make_pair(mi, cap), std::move(ps));
    }
  }

  std::vector<Task> tasks;
  for (int mi = 0; mi < static_cast<int>(models.size()); ++mi)
    for (int cap : cfg.capacities_mb)
      for (int nodes : cfg.node_counts)
        for (int classes : cfg.class_counts)
          for (int trial = 0; trial < cfg.trials; ++trial) {
            std::uint64_t cell =
                mix_seed(mix_seed(mix_seed(string_hash(cfg.models[mi].name),
                                           static_cast<std::uint64_t>(cap)),
                                  static_cast<std::uint64_t>(nodes)),
                         static_cast<std::uint64_t>(classes));
            tasks.push_back({mi, cap, nodes, classes, trial,
                             cfg.base_seed + cell +
                                 static_cast<std::uint64_t>(trial)});
          }

  std::vector<std::vector<TrialRecord>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      auto& recs = slots[i];
      const PlanState& ps = plans.at({t.model, t.capacity_mb});
      bool feasible = ps.feasible &&
                      static_cast<int>(ps.plan.partitions.size()) <= t.nodes;
      if (!feasible) {
        for (Algo a : {Algo::kOptimal, Algo::kRandom, Algo::kJoint})
          recs.push_back(base_record(cfg, t, a));
        continue;
      }
      CommGraph g = gen_comm_graph(t.nodes, t.seed, t.capacity_mb * kMiB);

      TrialRecord opt = base_record(cfg, t, Algo::kOptimal);
      fill_ok(opt, place_optimal(ps.plan, g, t.classes, mix_seed(t.seed, 1)));
      recs.push_back(std::move(opt));

      TrialRecord rnd = base_record(cfg, t, Algo::kRandom);
      if (auto rep = random_placement(ps.ctx, g, mix_seed(t.seed, 2)))
        fill_ok(rnd, *rep);
      recs.push_back(std::move(rnd));

      TrialRecord jnt = base_record(cfg, t, Algo::kJoint);
      if (auto rep = joint_placement(ps.ctx, g)) fill_ok(jnt, *rep);
      recs.push_back(std::move(jnt));
    }
  };

  threads = std::max(1, threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Slot order is (cell, trial); the CSV contract is cell, algo, trial.
  std::vector<TrialRecord> records;
  for (auto& s : slots)
    for (auto& r : s) records.push_back(std::move(r));
  std::vector<std::string> model_order;
  for (const auto& m : cfg.models) model_order.push_back(m.name);
  auto model_idx = [&](const std::string& name) {
    return std::find(model_order.begin(), model_order.end(), name) -
           model_order.begin();
  };
  std::stable_sort(records.begin(), records.end(),
                   [&](const TrialRecord& a, const TrialRecord& b) {
                     return std::tuple(model_idx(a.model), a.capacity_mb,
                                       a.nodes, a.classes, a.algo, a.trial) <
                            std::tuple(model_idx(b.model), b.capacity_mb,
                                       b.nodes, b.classes, b.algo, b.trial);
                   });
  return records;
}

namespace {

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::string records_to_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream os;
  os << "model,capacity_mb,nodes,classes,algo,trial,beta_s,bound_s,ratio,"
        "partitions,status\n";
  for (const TrialRecord& r : records) {
    os << r.model << ',' << r.capacity_mb << ',' << r.nodes << ',' << r.classes
       << ',' << to_string(r.algo) << ',' << r.trial << ',';
    if (r.status == TrialStatus::kInfeasible) {
      os << ",,,,";
    } else {
      os << fmt_g(r.beta_s) << ',' << fmt_g(r.bound_s) << ',' << fmt_g(r.ratio)
         << ',' << r.partitions << ',';
    }
    os << to_string(r.status) << '\n';
  }
  return os.str();
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw std::invalid_argument("no records to summarize");
  struct Acc {
    std::vector<double> beta[3];
    std::vector<double> ratio[3];
  };
  std::map<std::tuple<std::string, int, int, int>, Acc> cells;
  std::vector<std::tuple<std::string, int, int, int>> order;
  for (const TrialRecord& r : records) {
    auto key = std::tuple(r.model, r.capacity_mb, r.nodes, r.classes);
    if (!cells.count(key)) order.push_back(key);
    Acc& acc = cells[key];
    if (r.status != TrialStatus::kInfeasible) {
      acc.beta[static_cast<int>(r.algo)].push_back(r.beta_s);
      acc.ratio[static_cast<int>(r.algo)].push_back(r.ratio);
    }
  }

  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / v.size();
  };
  auto stddev = [&](const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean(v), s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (v.size() - 1));
  };

  std::vector<SummaryRow> rows;
  for (const auto& key : order) {
    const Acc& acc = cells.at(key);
    SummaryRow row;
    std::tie(row.model, row.capacity_mb, row.nodes, row.classes) = key;
    const auto& ob = acc.beta[static_cast<int>(Algo::kOptimal)];
    row.feasible = !ob.empty();
    row.ok_trials = static_cast<int>(ob.size());
    if (row.feasible) {
      row.mean_beta_opt = mean(ob);
      row.stddev_beta_opt = stddev(ob);
      row.mean_ratio_opt = mean(acc.ratio[static_cast<int>(Algo::kOptimal)]);
      row.mean_beta_random = mean(acc.beta[static_cast<int>(Algo::kRandom)]);
      row.mean_beta_joint = mean(acc.beta[static_cast<int>(Algo::kJoint)]);
      if (row.mean_beta_opt > 0) {
        row.speedup_vs_random = row.mean_beta_random / row.mean_beta_opt;
        if (row.mean_beta_joint > 0)
          row.reduction_vs_joint = 1.0 - row.mean_beta_opt / row.mean_beta_joint;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << "model,capacity_mb,nodes,classes,ok_trials,mean_beta_opt,"
        "stddev_beta_opt,mean_ratio_opt,mean_beta_random,mean_beta_joint,"
        "speedup_vs_random,reduction_vs_joint\n";
  for (const SummaryRow& r : rows) {
    os << r.model << ',' << r.capacity_mb << ',' << r.nodes << ',' << r.classes
       << ',' << r.ok_trials << ',';
    if (r.feasible) {
      os << fmt_g(r.mean_beta_opt) << ',' << fmt_g(r.stddev_beta_opt) << ','
         << fmt_g(r.mean_ratio_opt) << ',' << fmt_g(r.mean_beta_random) << ','
         << fmt_g(r.mean_beta_joint) << ',' << fmt_g(r.speedup_vs_random)
         << ',' << fmt_g(r.reduction_vs_joint);
    } else {
      os << ",,,,,,";
    }
    os << '\n';
  }
  return os.str();
}

bool any_cell_infeasible(const std::vector<TrialRecord>& records) {
  for (const SummaryRow& row : summarize(records))
    if (!row.feasible) return true;
  return false;
}

}  // namespace edgepipe
