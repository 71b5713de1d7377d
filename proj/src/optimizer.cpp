#include "mec/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace mec {

double pseudocost(double sar_between, double primary_dc_cost_v,
                  double primary_link_cost_v) {
  if (sar_between <= 0.0) return 0.0;
  double denom = primary_dc_cost_v + primary_link_cost_v;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return sar_between / denom;
}

namespace {

// Per-cluster primary DC and path-link cost, keyed by serving DC.
struct ClusterCosts {
  std::map<int, double> dc_cost;
  std::map<int, double> link_cost;
};

ClusterCosts cluster_costs(const ProvisionContext& ctx,
                           const ProvisioningPlan& plan) {
  ClusterCosts cc;
  for (const auto& c : plan.partition.clusters) {
    double h = 0.0;
    for (int l : c.leaves) h += ctx.demand_of(l);
    cc.dc_cost[c.serving_dc] = h * ctx.cost.b_dc;
    cc.link_cost[c.serving_dc] = 0.0;
  }
  for (const auto& f : plan.primary_flows)
    cc.link_cost[f.dc] += f.mbps * f.path.distance_km * ctx.cost.b_link *
                          ctx.cost.distance_unit_per_km;
  return cc;
}

Partition merged_partition(const Partition& p, int keep_idx, int absorb_idx,
                           int serving_dc, int n_nodes) {
  Partition out;
  for (int k = 0; k < (int)p.clusters.size(); ++k) {
    if (k == absorb_idx) continue;
    Cluster c = p.clusters[k];
    if (k == keep_idx) {
      const Cluster& other = p.clusters[absorb_idx];
      c.leaves.insert(c.leaves.end(), other.leaves.begin(), other.leaves.end());
      c.bss.insert(c.bss.end(), other.bss.begin(), other.bss.end());
      std::sort(c.leaves.begin(), c.leaves.end());
      std::sort(c.bss.begin(), c.bss.end());
      c.serving_dc = serving_dc;
    }
    out.clusters.push_back(std::move(c));
  }
  out.rebuild_index(n_nodes);
  return out;
}

}  // namespace

MergeTrace greedy_merge(const ProvisionContext& ctx, const Partition& initial,
                        const GreedyOptions& gopts) {
  MergeTrace trace;
  Partition cur = initial;
  auto [plan, costs] = provision(ctx, cur);
  trace.initial_cost = costs.total;

  const int n_nodes = (int)ctx.g.nodes().size();
  while (cur.clusters.size() > 1) {
    SarMatrix sar = inter_cluster_sar(cur, ctx.ho, ctx.g);
    ClusterCosts cc = cluster_costs(ctx, plan);

    struct Candidate {
      int ci, cj;  // cluster indices (v = ci's serving DC)
      double gamma;
    };
    std::vector<Candidate> cands;
    for (int i = 0; i < (int)cur.clusters.size(); ++i) {
      for (int j = 0; j < (int)cur.clusters.size(); ++j) {
        if (i == j) continue;
        int v = cur.clusters[i].serving_dc;
        int u = cur.clusters[j].serving_dc;
        double s = sar.between(v, u);
        if (s <= 0.0) continue;  // zero-SAR pairs are never merged
        cands.push_back({i, j, pseudocost(s, cc.dc_cost[v], cc.link_cost[v])});
      }
    }
    std::sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
      if (a.gamma != b.gamma) return a.gamma > b.gamma;
      auto ka = std::make_pair(cur.clusters[a.ci].serving_dc,
                               cur.clusters[a.cj].serving_dc);
      auto kb = std::make_pair(cur.clusters[b.ci].serving_dc,
                               cur.clusters[b.cj].serving_dc);
      return ka < kb;
    });

    bool merged = false;
    for (const auto& cand : cands) {
      int v = cur.clusters[cand.ci].serving_dc;
      int u = cur.clusters[cand.cj].serving_dc;

      struct Direction {
        int keep_dc;
        Partition part;
        ProvisioningPlan plan;
        CostBreakdown costs;
        bool ok = false;
      };
      Direction dirs[2];
      dirs[0].keep_dc = v;
      dirs[0].part = merged_partition(cur, cand.ci, cand.cj, v, n_nodes);
      dirs[1].keep_dc = u;
      dirs[1].part = merged_partition(cur, cand.ci, cand.cj, u, n_nodes);
      for (auto& d : dirs) {
        try {
          std::tie(d.plan, d.costs) = provision(ctx, d.part);
          d.ok = true;
        } catch (const ProvisionError&) {
          d.ok = false;
        }
      }
      int pick = -1;
      if (dirs[0].ok && dirs[1].ok) {
        if (std::fabs(dirs[0].costs.total - dirs[1].costs.total) <= 1e-12) {
          // Tie: keep the DC currently serving more demand.
          double hv = cc.dc_cost[v], hu = cc.dc_cost[u];
          pick = hv >= hu ? 0 : 1;
        } else {
          pick = dirs[0].costs.total < dirs[1].costs.total ? 0 : 1;
        }
      } else if (dirs[0].ok) {
        pick = 0;
      } else if (dirs[1].ok) {
        pick = 1;
      } else {
        continue;  // infeasible in both directions, try the next pair
      }
      Direction& d = dirs[pick];

      // Membership is fixed by the merge, but the cheapest serving DC for the
      // union may be a third candidate (typically a central core DC). Re-pick
      // it over the DCs latency-feasible for every demanding member leaf.
      {
        int midx = -1;
        for (int k = 0; k < (int)d.part.clusters.size(); ++k)
          if (d.part.clusters[k].serving_dc == d.keep_dc) midx = k;
        std::set<int> taken;
        for (int k = 0; k < (int)d.part.clusters.size(); ++k)
          if (k != midx) taken.insert(d.part.clusters[k].serving_dc);
        std::vector<int> common;
        bool first = true;
        for (int l : d.part.clusters[midx].leaves) {
          if (ctx.demand_of(l) <= 0) continue;
          const auto& cl = ctx.candidates(l);
          if (first) {
            common = cl;
            first = false;
          } else {
            std::vector<int> tmp;
            std::set_intersection(common.begin(), common.end(), cl.begin(),
                                  cl.end(), std::back_inserter(tmp));
            common.swap(tmp);
          }
        }
        for (int s : common) {
          if (s == d.keep_dc || taken.count(s)) continue;
          Partition alt = d.part;
          alt.clusters[midx].serving_dc = s;
          alt.rebuild_index(n_nodes);
          try {
            auto [ap, ac] = provision(ctx, alt);
            if (ac.total < d.costs.total - 1e-12) {
              d.part = std::move(alt);
              d.plan = std::move(ap);
              d.costs = ac;
              d.keep_dc = s;
            }
          } catch (const ProvisionError&) {
          }
        }
      }

      if (!gopts.force_merge_to_one &&
          d.costs.total >= costs.total - gopts.improvement_eps)
        continue;

      MergeStep step;
      step.kept_dc = d.keep_dc;
      step.absorbed_dc = d.keep_dc == v ? u : v;
      step.gamma = cand.gamma;
      step.total_cost = d.costs.total;
      step.n_serving_dcs = (int)d.part.clusters.size();
      step.total_sar = d.costs.total_sar;
      trace.steps.push_back(step);

      cur = std::move(d.part);
      plan = std::move(d.plan);
      costs = d.costs;
      merged = true;
      break;
    }
    if (!merged) break;
  }

  trace.final_partition = std::move(cur);
  trace.final_plan = std::move(plan);
  trace.final_costs = costs;
  return trace;
}

std::string MergeTrace::to_csv(const TopologyGraph& g) const {
  std::ostringstream os;
  os << "step,pair,gamma,direction,total_cost,n_serving_dcs,total_sar\n";
  char buf[256];
  for (size_t k = 0; k < steps.size(); ++k) {
    const auto& s = steps[k];
    snprintf(buf, sizeof buf, "%zu,%s|%s,%.9g,%s,%.9g,%d,%.9g\n", k + 1,
             g.nodes()[s.kept_dc].id.c_str(), g.nodes()[s.absorbed_dc].id.c_str(),
             s.gamma, g.nodes()[s.kept_dc].id.c_str(), s.total_cost,
             s.n_serving_dcs, s.total_sar);
    os << buf;
  }
  return os.str();
}

ExactOracle::ExactOracle(const ProvisionContext& ctx, long long enumeration_limit)
    : ctx_(ctx) {
  for (int leaf : ctx.g.leaf_dc_nodes()) {
    leaves_.push_back(leaf);
    choices_.push_back(ctx.candidates(leaf));
    if (choices_.back().empty())
      throw std::runtime_error("leaf " + ctx.g.nodes()[leaf].id +
                               " has no candidate serving DC");
  }
  long long total = 1;
  for (const auto& c : choices_) {
    total *= (long long)c.size();
    if (total > enumeration_limit)
      throw std::runtime_error("oracle enumeration limit exceeded");
  }

  std::vector<int> pick(leaves_.size(), 0);
  while (true) {
    Eval e;
    e.assignment = pick;
    Partition part = make_partition(pick);
    try {
      auto [plan, costs] = provision(ctx_, part);
      e.lp_and_const_cost = costs.total - costs.sar_cost;
      e.sar_volume = costs.total_sar;
      e.feasible = true;
    } catch (const ProvisionError&) {
      e.feasible = false;
      e.lp_and_const_cost = 0.0;
      e.sar_volume = 0.0;
    }
    evals_.push_back(std::move(e));

    int k = (int)pick.size() - 1;
    while (k >= 0 && pick[k] + 1 == (int)choices_[k].size()) pick[k--] = 0;
    if (k < 0) break;
    ++pick[k];
  }
}

Partition ExactOracle::make_partition(const std::vector<int>& assignment) const {
  std::map<int, Cluster> by_dc;
  for (size_t k = 0; k < leaves_.size(); ++k) {
    int dc = choices_[k][assignment[k]];
    Cluster& c = by_dc[dc];
    c.serving_dc = dc;
    c.leaves.push_back(leaves_[k]);
    const auto& bss = ctx_.g.rooted_bss(leaves_[k]);
    c.bss.insert(c.bss.end(), bss.begin(), bss.end());
  }
  Partition p;
  for (auto& [_, c] : by_dc) {
    std::sort(c.leaves.begin(), c.leaves.end());
    std::sort(c.bss.begin(), c.bss.end());
    p.clusters.push_back(std::move(c));
  }
  p.rebuild_index((int)ctx_.g.nodes().size());
  return p;
}

OracleResult ExactOracle::best(double b_sar) const {
  const Eval* best = nullptr;
  for (const auto& e : evals_) {
    if (!e.feasible) continue;
    if (!best || e.lp_and_const_cost + b_sar * e.sar_volume <
                     best->lp_and_const_cost + b_sar * best->sar_volume)
      best = &e;  // enumeration order is lexicographic, first win on ties
  }
  if (!best) throw std::runtime_error("all oracle assignments are infeasible");

  OracleResult res;
  res.partition = make_partition(best->assignment);
  std::tie(res.plan, res.costs) = provision(ctx_, res.partition);
  res.costs.sar_cost = b_sar * res.costs.total_sar;
  res.costs.total = res.costs.primary_dc_cost + res.costs.spare_dc_cost +
                    res.costs.primary_link_cost + res.costs.spare_link_cost +
                    res.costs.sar_cost;
  for (size_t k = 0; k < leaves_.size(); ++k)
    res.assignment[leaves_[k]] = choices_[k][best->assignment[k]];
  return res;
}

double ExactOracle::optimal_sar(double b_sar) const {
  const Eval* best = nullptr;
  for (const auto& e : evals_) {
    if (!e.feasible) continue;
    if (!best || e.lp_and_const_cost + b_sar * e.sar_volume <
                     best->lp_and_const_cost + b_sar * best->sar_volume)
      best = &e;
  }
  if (!best) throw std::runtime_error("all oracle assignments are infeasible");
  return best->sar_volume;
}

}  // namespace mec
