#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "mec/optimizer.hpp"
#include "mec/provisioner.hpp"
#include "mec/scenario.hpp"

namespace mec {

// Raised when demand cannot be served under the configured budget; carries
// the uncovered node ids.
class InfeasibleCoverage : public std::runtime_error {
 public:
  InfeasibleCoverage(const std::string& msg, std::vector<std::string> uncovered)
      : std::runtime_error(msg), uncovered_ids(std::move(uncovered)) {}
  std::vector<std::string> uncovered_ids;
};

struct ScenarioFiles {
  TopologyGraph topology;
  DemandProfile demand;
  std::vector<HandoverRecord> handover;
};

ScenarioFiles load_scenario_dir(const std::string& dir);

struct SweepConfig {
  std::string scenario_dir;
  int hour = 12;
  std::vector<double> budgets_rtt_ms = {10.0, 1.0};
  std::vector<double> b_sar_grid = {0, 1, 10, 100, 1000, 10000, 100000};
  CostModel cost;  // b_sar is taken from the grid (or b_sar for solve)
  double b_sar = 0.0;
  bool resilience = true;
  bool uncapacitated = true;
  int max_paths = 4;
  int max_candidate_dcs = 0;
  bool oracle = false;  // exact enumeration instead of the greedy pipeline
  bool force_merge_to_one = false;
  int jobs = 1;
  std::string out_dir = ".";

  ProvisionOptions provision_options() const;
};

SweepConfig load_sweep_config(const std::string& json_path);

// One full pipeline snapshot: service areas + demand + handover graph for an
// (hour, budget) pair, ready for provisioning.
struct PipelineInputs {
  ServiceAreaMap sam;
  HandoverGraph ho;
  std::map<int, double> leaf_demand;
  std::map<int, double> bs_demand;
};

PipelineInputs prepare_inputs(const ScenarioFiles& sc, int hour,
                              double budget_rtt_ms);

// K-cut -> repair -> greedy merge for one (hour, budget, b_sar) point.
struct SolveOutcome {
  MergeTrace trace;
  CostBreakdown costs;
  ProvisioningPlan plan;
};

SolveOutcome run_pipeline(const ScenarioFiles& sc, const PipelineInputs& in,
                          const CostModel& cost, const ProvisionOptions& opts,
                          const GreedyOptions& gopts = {});

// Writes plan.json and trace.csv into config.out_dir.
SolveOutcome cmd_solve(const SweepConfig& config);

struct SweepRow {
  double b_sar = 0.0;
  double budget_rtt_ms = 0.0;
  double link_cost = 0.0;
  double dc_cost = 0.0;
  double sar_cost = 0.0;
  double total = 0.0;
  int n_primary_dcs = 0;
  int n_secondary_dcs = 0;
  double total_sar = 0.0;
};

std::vector<SweepRow> run_sweep(const SweepConfig& config);
// Writes sweep.csv into config.out_dir and returns the rows.
std::vector<SweepRow> cmd_sweep(const SweepConfig& config);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

struct CompareFixedReport {
  double covered_demand_fraction = 0.0;  // of total, reachable from fixed DCs
  double centralized_total_dc_mbps = 0.0;  // primary + 1+1 duplicate spare
  double distributed_total_dc_mbps = 0.0;  // primary + shared spare
  double capacity_ratio = 0.0;             // distributed / centralized
  // (b_dc, fixed-placement DC cost, MEC DC cost) scaling samples.
  std::vector<std::array<double, 3>> dc_cost_curve;
};

CompareFixedReport run_compare_fixed(const SweepConfig& config,
                                     const std::vector<std::string>& fixed_dc_ids);
CompareFixedReport cmd_compare_fixed(const SweepConfig& config,
                                     const std::vector<std::string>& fixed_dc_ids);

struct GapRow {
  std::uint64_t seed = 0;
  double b_sar = 0.0;
  double greedy_total = 0.0;
  double oracle_total = 0.0;
  double ratio = 1.0;
};

struct GapReport {
  std::vector<GapRow> rows;
  double greedy_seconds = 0.0;
  double oracle_seconds = 0.0;
};

GapReport run_gap(const SweepConfig& config, const std::vector<std::uint64_t>& seeds,
                  const ScenarioParams& base_params);
GapReport cmd_gap(const SweepConfig& config, const std::vector<std::uint64_t>& seeds,
                  const ScenarioParams& base_params);

}  // namespace mec
