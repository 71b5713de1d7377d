#include "mec/provisioner.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mec {

using nlohmann::json;

ProvisionContext::ProvisionContext(const TopologyGraph& g_, const ServiceAreaMap& sam_,
                                   const HandoverGraph& ho_,
                                   std::map<int, double> leaf_demand_,
                                   std::map<int, double> bs_demand_, CostModel cost_,
                                   ProvisionOptions options_)
    : g(g_),
      sam(sam_),
      ho(ho_),
      leaf_demand(std::move(leaf_demand_)),
      bs_demand(std::move(bs_demand_)),
      cost(cost_),
      options(options_) {
  for (int leaf : g.leaf_dc_nodes()) {
    auto it = sam.dc_of.find(leaf);
    std::vector<int> cand =
        it == sam.dc_of.end() ? std::vector<int>{} : it->second;
    std::sort(cand.begin(), cand.end(), [&](int a, int b) {
      double ra = sam.rtt_ms.at({leaf, a});
      double rb = sam.rtt_ms.at({leaf, b});
      return std::tie(ra, a) < std::tie(rb, b);
    });
    if (options.max_candidate_dcs > 0 &&
        (int)cand.size() > options.max_candidate_dcs)
      cand.resize(options.max_candidate_dcs);
    std::sort(cand.begin(), cand.end());
    candidates_[leaf] = std::move(cand);
  }
  for (const auto& [bsn, demand] : bs_demand) {
    if (demand <= 0) continue;
    int leaf = g.backhaul_leaf(bsn);
    for (const auto& a : g.neighbors(bsn)) {
      if (a.other == leaf) {
        backhaul_cost_ += demand * g.links()[a.link].distance_km * cost.b_link *
                          cost.distance_unit_per_km;
        break;
      }
    }
  }
}

const std::vector<Path>& ProvisionContext::paths(int from, int to) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto key = std::make_pair(from, to);
  auto it = path_cache_.find(key);
  if (it != path_cache_.end()) return it->second;
  auto ps = feasible_paths(g, from, to, sam.budget_rtt_ms, options.max_paths);
  return path_cache_.emplace(key, std::move(ps)).first->second;
}

const std::vector<int>& ProvisionContext::candidates(int leaf) const {
  static const std::vector<int> empty;
  auto it = candidates_.find(leaf);
  return it == candidates_.end() ? empty : it->second;
}

double ProvisionContext::demand_of(int leaf) const {
  auto it = leaf_demand.find(leaf);
  return it == leaf_demand.end() ? 0.0 : it->second;
}

double ProvisionContext::total_leaf_demand() const {
  double s = 0.0;
  for (const auto& [_, h] : leaf_demand) s += h;
  return s;
}

double ProvisionContext::backhaul_cost() const { return backhaul_cost_; }

namespace {

double path_cost(const ProvisionContext& ctx, const Path& p) {
  return p.distance_km * ctx.cost.b_link * ctx.cost.distance_unit_per_km;
}

double link_cost(const ProvisionContext& ctx, int link) {
  return ctx.g.links()[link].distance_km * ctx.cost.b_link *
         ctx.cost.distance_unit_per_km;
}

}  // namespace

MecLp build_mec_lp(const ProvisionContext& ctx, const Partition& partition) {
  MecLp lp;
  auto& p = lp.problem;
  auto& vars = lp.vars;
  const auto& g = ctx.g;

  struct LeafInfo {
    int leaf;
    int serving;
    double h;
  };
  std::vector<LeafInfo> leaves;
  for (const auto& c : partition.clusters) {
    for (int l : c.leaves) {
      double h = ctx.demand_of(l);
      if (h <= 0) continue;
      const auto& cand = ctx.candidates(l);
      if (!std::binary_search(cand.begin(), cand.end(), c.serving_dc))
        throw ProvisionError("cluster serving DC " + g.nodes()[c.serving_dc].id +
                             " is not latency-feasible for leaf " + g.nodes()[l].id);
      if (ctx.options.resilience && (int)cand.size() < 2)
        throw ProvisionError("resilience requires a secondary DC but leaf " +
                             g.nodes()[l].id + " has a single candidate DC");
      leaves.push_back({l, c.serving_dc, h});
    }
  }

  // Primary path flows.
  for (const auto& li : leaves) {
    const auto& ps = ctx.paths(li.leaf, li.serving);
    if (ps.empty())
      throw ProvisionError("no feasible path from leaf " + g.nodes()[li.leaf].id +
                           " to serving DC " + g.nodes()[li.serving].id);
    auto& v = vars.primary_vars[li.leaf];
    auto& pp = vars.primary_paths[li.leaf];
    LpRow demand_row;
    demand_row.rel = Relation::eq;
    demand_row.rhs = li.h;
    demand_row.name = "primary-demand[" + g.nodes()[li.leaf].id + "]";
    for (const auto& path : ps) {
      int var = p.add_variable(path_cost(ctx, path));
      v.push_back(var);
      pp.push_back(&path);
      demand_row.coeffs.push_back({var, 1.0});
    }
    p.add_row(std::move(demand_row));
  }

  if (ctx.options.resilience) {
    // Failover splits and path flows per (leaf, secondary DC).
    for (const auto& li : leaves) {
      LpRow split_row;
      split_row.rel = Relation::eq;
      split_row.rhs = li.h;
      split_row.name = "failover-demand[" + g.nodes()[li.leaf].id + "]";
      for (int v2 : ctx.candidates(li.leaf)) {
        if (v2 == li.serving) continue;
        const auto& ps = ctx.paths(li.leaf, v2);
        if (ps.empty()) continue;
        auto key = std::make_pair(li.leaf, v2);
        int split = p.add_variable(0.0);
        vars.failover_split[key] = split;
        split_row.coeffs.push_back({split, 1.0});
        LpRow route_row;
        route_row.rel = Relation::eq;
        route_row.rhs = 0.0;
        route_row.coeffs.push_back({split, -1.0});
        route_row.name = "failover-route[" + g.nodes()[li.leaf].id + "->" +
                         g.nodes()[v2].id + "]";
        for (const auto& path : ps) {
          int var = p.add_variable(0.0);
          vars.failover_path_vars[key].push_back(var);
          vars.failover_paths[key].push_back(&path);
          route_row.coeffs.push_back({var, 1.0});
        }
        p.add_row(std::move(route_row));
      }
      if (split_row.coeffs.empty())
        throw ProvisionError("no failover candidate reachable from leaf " +
                             g.nodes()[li.leaf].id);
      p.add_row(std::move(split_row));
    }

    // Shared spare DC capacity: per failure scenario v1, per target v2.
    std::set<int> scenarios;
    for (const auto& li : leaves) scenarios.insert(li.serving);
    std::set<int> spare_targets;
    for (const auto& [key, _] : vars.failover_split) spare_targets.insert(key.second);
    for (int v2 : spare_targets)
      vars.spare_dc[v2] = p.add_variable(ctx.cost.b_dc);
    for (int v1 : scenarios) {
      for (int v2 : spare_targets) {
        LpRow row;
        row.rel = Relation::ge;
        row.rhs = 0.0;
        row.coeffs.push_back({vars.spare_dc[v2], 1.0});
        bool any = false;
        for (const auto& li : leaves) {
          if (li.serving != v1) continue;
          auto it = vars.failover_split.find({li.leaf, v2});
          if (it == vars.failover_split.end()) continue;
          row.coeffs.push_back({it->second, -1.0});
          any = true;
        }
        if (!any) continue;
        row.name = "spare-dc[fail=" + g.nodes()[v1].id + ",at=" + g.nodes()[v2].id + "]";
        p.add_row(std::move(row));
      }
    }

    // Shared spare link capacity: per scenario, per link used by its failover.
    std::set<int> spare_links;
    for (const auto& [key, paths] : vars.failover_paths)
      for (const Path* path : paths)
        for (int e : path->link_seq) spare_links.insert(e);
    for (int e : spare_links)
      vars.spare_link[e] = p.add_variable(link_cost(ctx, e));
    for (int v1 : scenarios) {
      std::map<int, std::vector<int>> load;  // link -> failover path vars
      for (const auto& li : leaves) {
        if (li.serving != v1) continue;
        for (const auto& [key, paths] : vars.failover_paths) {
          if (key.first != li.leaf) continue;
          const auto& pv = vars.failover_path_vars.at(key);
          for (size_t k = 0; k < paths.size(); ++k)
            for (int e : paths[k]->link_seq) load[e].push_back(pv[k]);
        }
      }
      for (const auto& [e, pvars] : load) {
        LpRow row;
        row.rel = Relation::ge;
        row.rhs = 0.0;
        row.coeffs.push_back({vars.spare_link[e], 1.0});
        for (int var : pvars) row.coeffs.push_back({var, -1.0});
        row.name = "spare-link[fail=" + g.nodes()[v1].id + ",e=" +
                   std::to_string(e) + "]";
        p.add_row(std::move(row));
      }
    }
  }

  if (!ctx.options.uncapacitated) {
    // Total link capacity: primary plus spare within B_e.
    std::map<int, LpRow> link_rows;
    for (const auto& [leaf, paths] : vars.primary_paths) {
      const auto& pv = vars.primary_vars.at(leaf);
      for (size_t k = 0; k < paths.size(); ++k)
        for (int e : paths[k]->link_seq) {
          if (g.links()[e].capacity_mbps == kUnbounded) continue;
          link_rows[e].coeffs.push_back({pv[k], 1.0});
        }
    }
    for (const auto& [e, var] : vars.spare_link) {
      if (g.links()[e].capacity_mbps == kUnbounded) continue;
      link_rows[e].coeffs.push_back({var, 1.0});
    }
    for (auto& [e, row] : link_rows) {
      row.rel = Relation::le;
      row.rhs = g.links()[e].capacity_mbps;
      row.name = "link-cap[" + std::to_string(e) + "]";
      p.add_row(std::move(row));
    }
    // Total DC capacity: spare within C_v minus the fixed primary load.
    std::map<int, double> primary_load;
    for (const auto& li : leaves) primary_load[li.serving] += li.h;
    for (const auto& [id, cap] : ctx.options.dc_capacity_mbps) {
      auto idx = g.find(id);
      if (!idx) throw ProvisionError("dc_capacity for unknown node: " + id);
      double remain = cap - (primary_load.count(*idx) ? primary_load[*idx] : 0.0);
      auto it = vars.spare_dc.find(*idx);
      LpRow row;
      row.rel = Relation::le;
      row.rhs = remain;
      if (it != vars.spare_dc.end()) row.coeffs.push_back({it->second, 1.0});
      row.name = "dc-cap[" + id + "]";
      p.add_row(std::move(row));
    }
  }
  return lp;
}

std::pair<ProvisioningPlan, CostBreakdown> provision(const ProvisionContext& ctx,
                                                     const Partition& partition) {
  MecLp lp = build_mec_lp(ctx, partition);
  LpSolution sol = solve_lp(lp.problem);
  if (sol.status != LpStatus::optimal)
    throw ProvisionError(sol.status == LpStatus::infeasible
                             ? "provisioning LP infeasible"
                             : "provisioning LP unbounded");

  constexpr double kFlowFloor = 1e-9;
  ProvisioningPlan plan;
  plan.partition = partition;
  plan.budget_rtt_ms = ctx.sam.budget_rtt_ms;

  std::map<int, int> serving_of;  // leaf -> serving DC
  for (const auto& c : partition.clusters)
    for (int l : c.leaves) serving_of[l] = c.serving_dc;

  for (const auto& [leaf, pv] : lp.vars.primary_vars) {
    const auto& paths = lp.vars.primary_paths.at(leaf);
    int dc = serving_of.at(leaf);
    plan.primary_dc_mbps[dc] += ctx.demand_of(leaf);
    for (size_t k = 0; k < pv.size(); ++k) {
      double f = sol.values[pv[k]];
      if (f < kFlowFloor) continue;
      plan.primary_flows.push_back({leaf, dc, *paths[k], f});
      for (int e : paths[k]->link_seq) plan.link_primary_mbps[e] += f;
    }
  }
  for (const auto& [dc, var] : lp.vars.spare_dc) {
    double v = sol.values[var];
    if (v > kFlowFloor) plan.spare_dc_mbps[dc] = v;
  }
  for (const auto& [e, var] : lp.vars.spare_link) {
    double v = sol.values[var];
    if (v > kFlowFloor) plan.link_spare_mbps[e] = v;
  }
  for (const auto& [key, pv] : lp.vars.failover_path_vars) {
    const auto& paths = lp.vars.failover_paths.at(key);
    for (size_t k = 0; k < pv.size(); ++k) {
      double f = sol.values[pv[k]];
      if (f < kFlowFloor) continue;
      plan.failover_flows.push_back(
          {key.first, serving_of.at(key.first), key.second, *paths[k], f});
    }
  }

  CostBreakdown costs;
  SarMatrix sar = inter_cluster_sar(partition, ctx.ho, ctx.g);
  costs.total_sar = sar.total;
  costs.primary_dc_cost = ctx.total_leaf_demand() * ctx.cost.b_dc;
  for (const auto& [dc, v] : plan.spare_dc_mbps)
    costs.spare_dc_cost += v * ctx.cost.b_dc;
  for (const auto& f : plan.primary_flows)
    costs.primary_link_cost += f.mbps * path_cost(ctx, f.path);
  if (ctx.options.include_backhaul_cost)
    costs.primary_link_cost += ctx.backhaul_cost();
  for (const auto& [e, v] : plan.link_spare_mbps)
    costs.spare_link_cost += v * link_cost(ctx, e);
  costs.sar_cost = ctx.cost.b_sar * sar.total;
  costs.total = costs.primary_dc_cost + costs.spare_dc_cost +
                costs.primary_link_cost + costs.spare_link_cost + costs.sar_cost;
  return {std::move(plan), costs};
}

int ProvisioningPlan::n_primary_dcs() const {
  int n = 0;
  for (const auto& [_, v] : primary_dc_mbps)
    if (v > 1e-9) ++n;
  return n;
}

int ProvisioningPlan::n_secondary_dcs() const {
  std::set<int> s;
  for (const auto& f : failover_flows) s.insert(f.secondary_dc);
  return (int)s.size();
}

std::vector<std::string> check_resilience(const ProvisionContext& ctx,
                                          const ProvisioningPlan& plan,
                                          double tol) {
  std::vector<std::string> bad;
  const auto& g = ctx.g;
  auto id = [&](int n) { return g.nodes()[n].id; };

  std::map<int, std::vector<int>> leaves_of;  // serving dc -> leaves with demand
  for (const auto& c : plan.partition.clusters)
    for (int l : c.leaves)
      if (ctx.demand_of(l) > 0) leaves_of[c.serving_dc].push_back(l);

  for (const auto& f : plan.primary_flows)
    if (f.path.latency_rtt_ms > plan.budget_rtt_ms + 1e-9)
      bad.push_back("primary path over budget for leaf " + id(f.leaf));

  for (const auto& [v1, leaves] : leaves_of) {
    std::map<int, double> dc_load;
    std::map<int, double> link_load;
    for (int l : leaves) {
      double recovered = 0.0;
      for (const auto& f : plan.failover_flows) {
        if (f.leaf != l || f.primary_dc != v1) continue;
        if (f.secondary_dc == v1)
          bad.push_back("failover of leaf " + id(l) + " targets the failed DC");
        const auto& cand = ctx.candidates(l);
        if (!std::binary_search(cand.begin(), cand.end(), f.secondary_dc))
          bad.push_back("failover target " + id(f.secondary_dc) +
                        " outside the service area of leaf " + id(l));
        if (f.path.latency_rtt_ms > plan.budget_rtt_ms + 1e-9)
          bad.push_back("failover path over budget for leaf " + id(l));
        recovered += f.mbps;
        dc_load[f.secondary_dc] += f.mbps;
        for (int e : f.path.link_seq) link_load[e] += f.mbps;
      }
      double h = ctx.demand_of(l);
      if (std::fabs(recovered - h) > tol * std::max(1.0, h))
        bad.push_back("scenario " + id(v1) + ": leaf " + id(l) +
                      " recovers " + std::to_string(recovered) + " of " +
                      std::to_string(h) + " Mbps");
    }
    for (const auto& [dc, load] : dc_load) {
      auto it = plan.spare_dc_mbps.find(dc);
      double spare = it == plan.spare_dc_mbps.end() ? 0.0 : it->second;
      if (load > spare + tol * std::max(1.0, load))
        bad.push_back("scenario " + id(v1) + ": spare DC capacity at " + id(dc) +
                      " exceeded (" + std::to_string(load) + " > " +
                      std::to_string(spare) + ")");
    }
    for (const auto& [e, load] : link_load) {
      auto it = plan.link_spare_mbps.find(e);
      double spare = it == plan.link_spare_mbps.end() ? 0.0 : it->second;
      if (load > spare + tol * std::max(1.0, load))
        bad.push_back("scenario " + id(v1) + ": spare link capacity on link " +
                      std::to_string(e) + " exceeded");
    }
    if (!ctx.options.uncapacitated) {
      for (const auto& [e, load] : link_load) {
        const Link& le = g.links()[e];
        if (le.capacity_mbps == kUnbounded) continue;
        double primary = 0.0;
        auto it = plan.link_primary_mbps.find(e);
        if (it != plan.link_primary_mbps.end()) primary = it->second;
        if (primary + load > le.capacity_mbps + tol)
          bad.push_back("scenario " + id(v1) + ": link " + std::to_string(e) +
                        " over its maximum capacity");
      }
    }
  }
  return bad;
}

std::string plan_to_json(const ProvisionContext& ctx, const ProvisioningPlan& plan,
                         const CostBreakdown& costs) {
  const auto& g = ctx.g;
  auto id = [&](int n) { return g.nodes()[n].id; };
  json j;
  j["budget_rtt_ms"] = plan.budget_rtt_ms;
  j["clusters"] = json::array();
  for (const auto& c : plan.partition.clusters) {
    json jc;
    jc["serving_dc"] = id(c.serving_dc);
    jc["leaves"] = json::array();
    for (int l : c.leaves) jc["leaves"].push_back(id(l));
    std::set<std::string> secondaries;
    for (const auto& f : plan.failover_flows)
      if (std::find(c.leaves.begin(), c.leaves.end(), f.leaf) != c.leaves.end())
        secondaries.insert(id(f.secondary_dc));
    jc["secondary_dcs"] = secondaries;
    j["clusters"].push_back(std::move(jc));
  }
  j["dc_capacity"] = json::object();
  for (const auto& [dc, v] : plan.primary_dc_mbps) {
    j["dc_capacity"][id(dc)]["primary_mbps"] = v;
    j["dc_capacity"][id(dc)]["spare_mbps"] = 0.0;
  }
  for (const auto& [dc, v] : plan.spare_dc_mbps) {
    if (!j["dc_capacity"].contains(id(dc)))
      j["dc_capacity"][id(dc)]["primary_mbps"] = 0.0;
    j["dc_capacity"][id(dc)]["spare_mbps"] = v;
  }
  j["links"] = json::object();
  auto link_name = [&](int e) {
    const Link& l = g.links()[e];
    return l.a + "-" + l.b;
  };
  for (const auto& [e, v] : plan.link_primary_mbps)
    j["links"][link_name(e)]["primary_mbps"] = v;
  for (const auto& [e, v] : plan.link_spare_mbps) {
    if (!j["links"].contains(link_name(e)))
      j["links"][link_name(e)]["primary_mbps"] = 0.0;
    j["links"][link_name(e)]["spare_mbps"] = v;
  }
  j["costs"] = {{"primary_dc_cost", costs.primary_dc_cost},
                {"spare_dc_cost", costs.spare_dc_cost},
                {"primary_link_cost", costs.primary_link_cost},
                {"spare_link_cost", costs.spare_link_cost},
                {"sar_cost", costs.sar_cost},
                {"total", costs.total},
                {"total_sar", costs.total_sar}};
  return j.dump(2);
}

}  // namespace mec
