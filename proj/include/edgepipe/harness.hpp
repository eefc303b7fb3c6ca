#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edgepipe/model_dag.hpp"

namespace edgepipe {

struct FixtureSpec {
  std::string name;
  ModelFamily family = ModelFamily::kChain;
  int blocks = 1;
  std::uint64_t seed = 0;
};

/// Sweep configuration. Defaults mirror the evaluation setup: node counts
/// {5,10,15,20,50}, class counts {2,5,8,11,14,17,20}, capacities
/// {64,128,256,512} MB, 50 trials per cell.
struct ExperimentConfig {
  std::vector<FixtureSpec> models{
      {"resnet_like", ModelFamily::kResidual, 16, 1},
      {"inception_like", ModelFamily::kInception, 32, 2},
  };
  std::vector<int> node_counts{5, 10, 15, 20, 50};
  std::vector<int> class_counts{2, 5, 8, 11, 14, 17, 20};
  std::vector<int> capacities_mb{64, 128, 256, 512};
  int trials = 50;
  std::uint64_t base_seed = 1729;
  double lambda = 1.44 * 2.1;
};

ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

enum class Algo { kOptimal, kRandom, kJoint };
enum class TrialStatus { kOk, kInfeasible, kMatchingFailedRetried };

std::string to_string(Algo a);
std::string to_string(TrialStatus s);

struct TrialRecord {
  std::string model;
  int capacity_mb = 0;
  int nodes = 0;
  int classes = 0;
  Algo algo = Algo::kOptimal;
  int trial = 0;
  double beta_s = 0;
  double bound_s = 0;
  double ratio = 0;
  int partitions = 0;
  TrialStatus status = TrialStatus::kOk;
};

/// Runs every (model x capacity x nodes x classes) cell for `trials` seeded
/// trials. All three algorithms see the same communication graph within a
/// trial. Deterministic for a fixed config regardless of thread count.
std::vector<TrialRecord> run_sweep(const ExperimentConfig& cfg,
                                   int threads = 1);

std::string records_to_csv(const std::vector<TrialRecord>& records);

struct SummaryRow {
  std::string model;
  int capacity_mb = 0;
  int nodes = 0;
  int classes = 0;
  int ok_trials = 0;  // per algo = optimal
  double mean_beta_opt = 0, stddev_beta_opt = 0, mean_ratio_opt = 0;
  double mean_beta_random = 0, mean_beta_joint = 0;
  double speedup_vs_random = 0;    // mean random beta / mean optimal beta
  double reduction_vs_joint = 0;   // 1 - mean optimal beta / mean joint beta
  bool feasible = true;
};

/// Per-cell aggregates over ok-status records; infeasible cells carry empty
/// statistics.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);
std::string summary_to_csv(const std::vector<SummaryRow>& rows);

/// True when at least one cell produced no feasible trial at all.
bool any_cell_infeasible(const std::vector<TrialRecord>& records);

}  // namespace edgepipe
