#include "mec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <set>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "mec/multiway_cut.hpp"

namespace mec {

using nlohmann::json;

ScenarioFiles load_scenario_dir(const std::string& dir) {
  ScenarioFiles sc{load_topology(dir + "/topology.json"),
                   DemandProfile::load_csv(dir + "/demand.csv"),
                   load_handover_csv(dir + "/handover.csv")};
  return sc;
}

ProvisionOptions SweepConfig::provision_options() const {
  ProvisionOptions o;
  o.resilience = resilience;
  o.uncapacitated = uncapacitated;
  o.max_paths = max_paths;
  o.max_candidate_dcs = max_candidate_dcs;
  return o;
}

SweepConfig load_sweep_config(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw std::runtime_error("cannot open config file: " + json_path);
  json j = json::parse(in);
  SweepConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "scenario_dir") c.scenario_dir = it->get<std::string>();
    else if (k == "hour") c.hour = it->get<int>();
    else if (k == "budgets_rtt_ms") c.budgets_rtt_ms = it->get<std::vector<double>>();
    else if (k == "b_sar_grid") c.b_sar_grid = it->get<std::vector<double>>();
    else if (k == "b_dc") c.cost.b_dc = it->get<double>();
    else if (k == "b_link") c.cost.b_link = it->get<double>();
    else if (k == "b_sar") c.b_sar = it->get<double>();
    else if (k == "resilience") c.resilience = it->get<bool>();
    else if (k == "uncapacitated") c.uncapacitated = it->get<bool>();
    else if (k == "max_paths") c.max_paths = it->get<int>();
    else if (k == "max_candidate_dcs") c.max_candidate_dcs = it->get<int>();
    else if (k == "oracle") c.oracle = it->get<bool>();
    else if (k == "force_merge_to_one") c.force_merge_to_one = it->get<bool>();
    else if (k == "jobs") c.jobs = it->get<int>();
    else if (k == "out_dir") c.out_dir = it->get<std::string>();
    else throw std::runtime_error("unknown config field: " + k);
  }
  if (c.budgets_rtt_ms.empty()) throw std::runtime_error("budgets_rtt_ms is empty");
  if (c.b_sar_grid.empty()) throw std::runtime_error("b_sar_grid is empty");
  return c;
}

PipelineInputs prepare_inputs(const ScenarioFiles& sc, int hour,
                              double budget_rtt_ms) {
  PipelineInputs in{service_areas(sc.topology, budget_rtt_ms),
                    build_handover_graph(sc.topology, sc.handover, hour),
                    aggregate_demand(sc.demand, sc.topology, hour),
                    {}};
  for (const auto& r : sc.demand.rows)
    if (r.hour == hour)
      in.bs_demand[sc.topology.index_of(r.bs_id)] += r.demand_mbps;
  return in;
}

namespace {

void check_coverage(const TopologyGraph& g, const ProvisionContext& ctx) {
  std::vector<std::string> uncovered;
  for (int leaf : g.leaf_dc_nodes()) {
    if (ctx.demand_of(leaf) <= 0) continue;
    if (ctx.candidates(leaf).empty()) {
      uncovered.push_back(g.nodes()[leaf].id);
      for (int bs : g.rooted_bss(leaf)) uncovered.push_back(g.nodes()[bs].id);
    }
  }
  if (!uncovered.empty())
    throw InfeasibleCoverage("demand cannot be covered under the latency budget",
                             uncovered);
}

}  // namespace

SolveOutcome run_pipeline(const ScenarioFiles& sc, const PipelineInputs& in,
                          const CostModel& cost, const ProvisionOptions& opts,
                          const GreedyOptions& gopts) {
  ProvisionContext ctx(sc.topology, in.sam, in.ho, in.leaf_demand, in.bs_demand,
                       cost, opts);
  check_coverage(sc.topology, ctx);
  CutResult cut = isolating_kcut(sc.topology, in.ho);
  cut = repair_partition(cut, sc.topology, in.ho);
  SolveOutcome out;
  out.trace = greedy_merge(ctx, cut.partition, gopts);
  out.costs = out.trace.final_costs;
  out.plan = out.trace.final_plan;
  return out;
}

SolveOutcome cmd_solve(const SweepConfig& config) {
  ScenarioFiles sc = load_scenario_dir(config.scenario_dir);
  PipelineInputs in = prepare_inputs(sc, config.hour, config.budgets_rtt_ms[0]);
  CostModel cost = config.cost;
  cost.b_sar = config.b_sar;
  GreedyOptions gopts;
  gopts.force_merge_to_one = config.force_merge_to_one;
  SolveOutcome out =
      run_pipeline(sc, in, cost, config.provision_options(), gopts);

  std::filesystem::create_directories(config.out_dir);
  ProvisionContext ctx(sc.topology, in.sam, in.ho, in.leaf_demand, in.bs_demand,
                       cost, config.provision_options());
  std::ofstream plan_out(config.out_dir + "/plan.json");
  plan_out << plan_to_json(ctx, out.plan, out.costs) << "\n";
  std::ofstream trace_out(config.out_dir + "/trace.csv");
  trace_out << out.trace.to_csv(sc.topology);
  return out;
}

namespace {

SweepRow make_row(double b_sar, double budget, const CostBreakdown& c,
                  const ProvisioningPlan& plan) {
  SweepRow r;
  r.b_sar = b_sar;
  r.budget_rtt_ms = budget;
  r.link_cost = c.primary_link_cost + c.spare_link_cost;
  r.dc_cost = c.primary_dc_cost + c.spare_dc_cost;
  r.sar_cost = c.sar_cost;
  r.total = c.total;
  r.n_primary_dcs = plan.n_primary_dcs();
  r.n_secondary_dcs = plan.n_secondary_dcs();
  r.total_sar = c.total_sar;
  return r;
}

template <typename F>
void parallel_for(int n, int jobs, F&& body) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::future<void>> fs;
  for (int w = 0; w < std::min(jobs, n); ++w)
    fs.push_back(std::async(std::launch::async, [&]() {
      while (true) {
        int i = next.fetch_add(1);
        if (i >= n) break;
        body(i);
      }
    }));
  for (auto& f : fs) f.get();
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  ScenarioFiles sc = load_scenario_dir(config.scenario_dir);
  std::vector<SweepRow> rows;
  for (double budget : config.budgets_rtt_ms) {
    PipelineInputs in = prepare_inputs(sc, config.hour, budget);
    const int n = (int)config.b_sar_grid.size();
    std::vector<SweepRow> batch(n);
    std::vector<std::string> errors(n);
    if (config.oracle) {
      CostModel cost = config.cost;
      cost.b_sar = 0.0;
      ProvisionContext ctx(sc.topology, in.sam, in.ho, in.leaf_demand,
                           in.bs_demand, cost, config.provision_options());
      check_coverage(sc.topology, ctx);
      ExactOracle oracle(ctx);
      for (int i = 0; i < n; ++i) {
        double b = config.b_sar_grid[i];
        OracleResult res = oracle.best(b);
        if (config.resilience) {
          auto bad = check_resilience(ctx, res.plan);
          if (!bad.empty())
            throw std::runtime_error("plan failed resilience validation: " + bad[0]);
        }
        batch[i] = make_row(b, budget, res.costs, res.plan);
      }
    } else {
      parallel_for(n, config.jobs, [&](int i) {
        try {
          CostModel cost = config.cost;
          cost.b_sar = config.b_sar_grid[i];
          GreedyOptions gopts;
          gopts.force_merge_to_one = config.force_merge_to_one;
          SolveOutcome out =
              run_pipeline(sc, in, cost, config.provision_options(), gopts);
          if (config.resilience) {
            ProvisionContext ctx(sc.topology, in.sam, in.ho, in.leaf_demand,
                                 in.bs_demand, cost, config.provision_options());
            auto bad = check_resilience(ctx, out.plan);
            if (!bad.empty())
              throw std::runtime_error("plan failed resilience validation: " +
                                       bad[0]);
          }
          batch[i] = make_row(config.b_sar_grid[i], budget, out.costs, out.plan);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      });
      for (int i = 0; i < n; ++i)
        if (!errors[i].empty()) throw std::runtime_error(errors[i]);
    }
    rows.insert(rows.end(), batch.begin(), batch.end());
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "b_sar,budget,link_cost,dc_cost,sar_cost,total,n_primary_dcs,"
        "n_secondary_dcs,total_sar\n";
  char buf[256];
  for (const auto& r : rows) {
    snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%d,%d,%.9g\n",
             r.b_sar, r.budget_rtt_ms, r.link_cost, r.dc_cost, r.sar_cost,
             r.total, r.n_primary_dcs, r.n_secondary_dcs, r.total_sar);
    os << buf;
  }
  return os.str();
}

std::vector<SweepRow> cmd_sweep(const SweepConfig& config) {
  auto rows = run_sweep(config);
  std::filesystem::create_directories(config.out_dir);
  std::ofstream out(config.out_dir + "/sweep.csv");
  out << sweep_to_csv(rows);
  return rows;
}

CompareFixedReport run_compare_fixed(const SweepConfig& config,
                                     const std::vector<std::string>& fixed_dc_ids) {
  if (fixed_dc_ids.empty()) throw std::runtime_error("fixed DC set is empty");
  ScenarioFiles sc = load_scenario_dir(config.scenario_dir);
  PipelineInputs in = prepare_inputs(sc, config.hour, config.budgets_rtt_ms[0]);
  CostModel cost = config.cost;
  cost.b_sar = config.b_sar;
  ProvisionContext ctx(sc.topology, in.sam, in.ho, in.leaf_demand, in.bs_demand,
                       cost, config.provision_options());

  std::set<int> fixed;
  for (const auto& id : fixed_dc_ids) fixed.insert(sc.topology.index_of(id));

  CompareFixedReport rep;
  double total_demand = 0.0, covered = 0.0;
  for (int leaf : sc.topology.leaf_dc_nodes()) {
    double h = ctx.demand_of(leaf);
    if (h <= 0) continue;
    total_demand += h;
    for (int v : ctx.candidates(leaf))
      if (fixed.count(v)) {
        covered += h;
        break;
      }
  }
  rep.covered_demand_fraction = total_demand > 0 ? covered / total_demand : 1.0;
  // Legacy 1+1: full duplicate standby capacity for everything served.
  rep.centralized_total_dc_mbps = 2.0 * covered;

  SolveOutcome mec = run_pipeline(sc, in, cost, config.provision_options());
  double dist_primary = 0.0, dist_spare = 0.0;
  for (const auto& [_, v] : mec.plan.primary_dc_mbps) dist_primary += v;
  for (const auto& [_, v] : mec.plan.spare_dc_mbps) dist_spare += v;
  rep.distributed_total_dc_mbps = dist_primary + dist_spare;
  rep.capacity_ratio = rep.centralized_total_dc_mbps > 0
                           ? rep.distributed_total_dc_mbps /
                                 rep.centralized_total_dc_mbps
                           : 0.0;

  for (double scale : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    CostModel c2 = cost;
    c2.b_dc = cost.b_dc * scale;
    SolveOutcome out = run_pipeline(sc, in, c2, config.provision_options());
    double fixed_cost = rep.centralized_total_dc_mbps * c2.b_dc;
    double mec_cost = out.costs.primary_dc_cost + out.costs.spare_dc_cost;
    rep.dc_cost_curve.push_back({c2.b_dc, fixed_cost, mec_cost});
  }
  return rep;
}

CompareFixedReport cmd_compare_fixed(const SweepConfig& config,
                                     const std::vector<std::string>& fixed_dc_ids) {
  auto rep = run_compare_fixed(config, fixed_dc_ids);
  std::filesystem::create_directories(config.out_dir);
  json j;
  j["covered_demand_fraction"] = rep.covered_demand_fraction;
  j["centralized_total_dc_mbps"] = rep.centralized_total_dc_mbps;
  j["distributed_total_dc_mbps"] = rep.distributed_total_dc_mbps;
  j["capacity_ratio"] = rep.capacity_ratio;
  j["dc_cost_curve"] = json::array();
  for (const auto& row : rep.dc_cost_curve)
    j["dc_cost_curve"].push_back(
        {{"b_dc", row[0]}, {"fixed_dc_cost", row[1]}, {"mec_dc_cost", row[2]}});
  std::ofstream out(config.out_dir + "/compare_fixed.json");
  out << j.dump(2) << "\n";
  return rep;
}

GapReport run_gap(const SweepConfig& config, const std::vector<std::uint64_t>& seeds,
                  const ScenarioParams& base_params) {
  GapReport rep;
  using Clock = std::chrono::steady_clock;
  for (std::uint64_t seed : seeds) {
    ScenarioParams params = base_params;
    params.seed = seed;
    GeneratedScenario gen = generate_scenario(params);
    ScenarioFiles sc{std::move(gen.topology), std::move(gen.demand),
                     std::move(gen.handover)};
    PipelineInputs in = prepare_inputs(sc, config.hour, config.budgets_rtt_ms[0]);

    CostModel base_cost = config.cost;
    base_cost.b_sar = 0.0;
    ProvisionContext octx(sc.topology, in.sam, in.ho, in.leaf_demand,
                          in.bs_demand, base_cost, config.provision_options());
    check_coverage(sc.topology, octx);
    auto t0 = Clock::now();
    ExactOracle oracle(octx);
    std::vector<double> oracle_totals;
    for (double b : config.b_sar_grid)
      oracle_totals.push_back(oracle.best(b).costs.total);
    rep.oracle_seconds += std::chrono::duration<double>(Clock::now() - t0).count();

    for (size_t i = 0; i < config.b_sar_grid.size(); ++i) {
      CostModel cost = config.cost;
      cost.b_sar = config.b_sar_grid[i];
      auto t1 = Clock::now();
      SolveOutcome out = run_pipeline(sc, in, cost, config.provision_options());
      rep.greedy_seconds +=
          std::chrono::duration<double>(Clock::now() - t1).count();
      GapRow row;
      row.seed = seed;
      row.b_sar = config.b_sar_grid[i];
      row.greedy_total = out.costs.total;
      row.oracle_total = oracle_totals[i];
      row.ratio = row.oracle_total > 0 ? row.greedy_total / row.oracle_total : 1.0;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

GapReport cmd_gap(const SweepConfig& config, const std::vector<std::uint64_t>& seeds,
                  const ScenarioParams& base_params) {
  auto rep = run_gap(config, seeds, base_params);
  std::filesystem::create_directories(config.out_dir);
  std::ofstream out(config.out_dir + "/gap.csv");
  out << "seed,b_sar,greedy_total,oracle_total,ratio\n";
  char buf[256];
  for (const auto& r : rep.rows) {
    snprintf(buf, sizeof buf, "%llu,%.9g,%.9g,%.9g,%.9g\n",
             (unsigned long long)r.seed, r.b_sar, r.greedy_total, r.oracle_total,
             r.ratio);
    out << buf;
  }
  return rep;
}

}  // namespace mec
