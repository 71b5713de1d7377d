#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mec/provisioner.hpp"

namespace mec {

struct MergeStep {
  int kept_dc = -1;     // serving DC of the merged cluster
  int absorbed_dc = -1; // serving DC whose cluster was folded in
  double gamma = 0.0;
  double total_cost = 0.0;
  int n_serving_dcs = 0;
  double total_sar = 0.0;
};

struct MergeTrace {
  std::vector<MergeStep> steps;
  Partition final_partition;
  CostBreakdown final_costs;
  ProvisioningPlan final_plan;
  double initial_cost = 0.0;

  std::string to_csv(const TopologyGraph& g) const;
};

struct GreedyOptions {
  bool force_merge_to_one = false;  // keep merging best pairs down to 1 cluster
  double improvement_eps = 1e-9;
};

// Merge-candidate ranking ratio: inter-cluster SAR over the primary DC plus
// path-link cost of cluster v. Infinite when v carries no cost but SAR > 0.
double pseudocost(double sar_between, double primary_dc_cost_v,
                  double primary_link_cost_v);

MergeTrace greedy_merge(const ProvisionContext& ctx, const Partition& initial,
                        const GreedyOptions& gopts = {});

struct OracleResult {
  Partition partition;
  CostBreakdown costs;
  ProvisioningPlan plan;
  std::map<int, int> assignment;  // leaf -> serving DC
};

// Exhaustive leaf-to-DC assignment search with the MEC-LP inner solve. The
// LP part of each assignment's cost is independent of b_sar, so one oracle
// instance can be swept over a b_sar grid at enumeration cost paid once.
class ExactOracle {
 public:
  ExactOracle(const ProvisionContext& ctx, long long enumeration_limit = 1'000'000);

  // Minimum-cost assignment at the context's cost model with b_sar overridden.
  OracleResult best(double b_sar) const;
  // Total relocation volume of the optimum at the given b_sar.
  double optimal_sar(double b_sar) const;

  long long n_assignments() const { return (long long)evals_.size(); }

 private:
  struct Eval {
    std::vector<int> assignment;  // per-leaf choice index
    double lp_and_const_cost;     // everything except the SAR term
    double sar_volume;
    bool feasible;
  };
  const ProvisionContext& ctx_;
  std::vector<int> leaves_;
  std::vector<std::vector<int>> choices_;  // candidate DCs per leaf
  std::vector<Eval> evals_;

  Partition make_partition(const std::vector<int>& assignment) const;
  friend struct OracleTestPeer;
};

}  // namespace mec
