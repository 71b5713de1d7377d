#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "mec/demand.hpp"
#include "mec/lp.hpp"
#include "mec/topology.hpp"

namespace mec {

struct CostModel {
  double b_dc = 1.0;    // $ per Mbps of DC capacity
  double b_link = 1.0;  // $ per Mbps per distance unit of link bandwidth
  double b_sar = 0.0;   // $ per relocation per hour
  double distance_unit_per_km = 1.0;  // set to 0.621 for per-mile link pricing
};

struct ProvisionOptions {
  bool resilience = true;
  bool uncapacitated = true;  // drop link/DC capacity caps
  int max_paths = 4;
  int max_candidate_dcs = 0;  // 0 = no trimming of DC(l)
  bool include_backhaul_cost = true;
  std::map<std::string, double> dc_capacity_mbps;  // finite caps, by DC id
};

// Shared inputs for provisioning one (hour, budget) snapshot. Owns a
// thread-safe path cache so repeated provisioning of candidate assignments
// does not re-enumerate paths.
class ProvisionContext {
 public:
  ProvisionContext(const TopologyGraph& g, const ServiceAreaMap& sam,
                   const HandoverGraph& ho, std::map<int, double> leaf_demand,
                   std::map<int, double> bs_demand, CostModel cost,
                   ProvisionOptions options);

  const TopologyGraph& g;
  const ServiceAreaMap& sam;
  const HandoverGraph& ho;
  const std::map<int, double> leaf_demand;
  const std::map<int, double> bs_demand;
  const CostModel cost;
  const ProvisionOptions options;

  // Feasible paths from a leaf to a DC under the service-area budget.
  const std::vector<Path>& paths(int from, int to) const;
  // Candidate serving DCs DC(l), trimmed to the max_candidate_dcs closest.
  const std::vector<int>& candidates(int leaf) const;

  double demand_of(int leaf) const;
  double total_leaf_demand() const;
  // Constant backhaul transport cost (BS demand over backhaul links).
  double backhaul_cost() const;

 private:
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, std::vector<Path>> path_cache_;
  std::map<int, std::vector<int>> candidates_;
  double backhaul_cost_ = 0.0;
};

struct CostBreakdown {
  double primary_dc_cost = 0.0;
  double spare_dc_cost = 0.0;
  double primary_link_cost = 0.0;
  double spare_link_cost = 0.0;
  double sar_cost = 0.0;
  double total = 0.0;
  double total_sar = 0.0;  // relocation volume (handover/hour)
};

struct ProvisioningPlan {
  struct PrimaryFlow {
    int leaf, dc;
    Path path;
    double mbps;
  };
  struct FailoverFlow {
    int leaf, primary_dc, secondary_dc;
    Path path;
    double mbps;
  };
  Partition partition;
  double budget_rtt_ms = 0.0;
  std::map<int, double> primary_dc_mbps;
  std::map<int, double> spare_dc_mbps;   // c^dc-sp-tot
  std::map<int, double> link_primary_mbps;  // by link index, backbone only
  std::map<int, double> link_spare_mbps;    // c^link-sp-tot
  std::vector<PrimaryFlow> primary_flows;
  std::vector<FailoverFlow> failover_flows;

  int n_primary_dcs() const;
  int n_secondary_dcs() const;
};

struct MecLpVars {
  // Primary path-flow variables per leaf.
  std::map<int, std::vector<int>> primary_vars;
  std::map<int, std::vector<const Path*>> primary_paths;
  // Failover split and path-flow variables per (leaf, secondary DC).
  std::map<std::pair<int, int>, int> failover_split;
  std::map<std::pair<int, int>, std::vector<int>> failover_path_vars;
  std::map<std::pair<int, int>, std::vector<const Path*>> failover_paths;
  std::map<int, int> spare_dc;    // DC node -> var
  std::map<int, int> spare_link;  // link index -> var
};

struct MecLp {
  LpProblem problem;
  MecLpVars vars;
};

class ProvisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Builds MEC-LP for a fixed assignment: primary routing, shared spare DC and
// link reservations against any single serving-DC failure. The objective
// carries only the assignment-dependent terms; primary-DC, backhaul and SAR
// costs are constants added by provision().
MecLp build_mec_lp(const ProvisionContext& ctx, const Partition& partition);

std::pair<ProvisioningPlan, CostBreakdown> provision(const ProvisionContext& ctx,
                                                     const Partition& partition);

// Independent single-failure simulation over an emitted plan: every scenario
// must recover full demand within budget using only reserved spare capacity.
std::vector<std::string> check_resilience(const ProvisionContext& ctx,
                                          const ProvisioningPlan& plan,
                                          double tol = 1e-6);

std::string plan_to_json(const ProvisionContext& ctx, const ProvisioningPlan& plan,
                         const CostBreakdown& costs);

}  // namespace mec
