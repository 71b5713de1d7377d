// Python bindings: scenario generation, validation and the provisioning
// pipeline at the granularity the CLI exposes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mec/experiments.hpp"
#include "mec/multiway_cut.hpp"
#include "mec/optimizer.hpp"
#include "mec/scenario.hpp"

namespace py = pybind11;
using namespace mec;

namespace {

SweepConfig make_config(const std::string& scenario_dir, int hour,
                        std::vector<double> budgets, double b_dc, double b_link,
                        double b_sar, std::vector<double> b_sar_grid,
                        bool resilience, bool uncapacitated, int max_paths,
                        int max_candidate_dcs, bool oracle,
                        bool force_merge_to_one, int jobs,
                        const std::string& out_dir) {
  SweepConfig c;
  c.scenario_dir = scenario_dir;
  c.hour = hour;
  if (!budgets.empty()) c.budgets_rtt_ms = std::move(budgets);
  c.cost.b_dc = b_dc;
  c.cost.b_link = b_link;
  c.b_sar = b_sar;
  if (!b_sar_grid.empty()) c.b_sar_grid = std::move(b_sar_grid);
  c.resilience = resilience;
  c.uncapacitated = uncapacitated;
  c.max_paths = max_paths;
  c.max_candidate_dcs = max_candidate_dcs;
  c.oracle = oracle;
  c.force_merge_to_one = force_merge_to_one;
  c.jobs = jobs;
  c.out_dir = out_dir;
  return c;
}

py::dict costs_dict(const CostBreakdown& c) {
  py::dict d;
  d["primary_dc_cost"] = c.primary_dc_cost;
  d["spare_dc_cost"] = c.spare_dc_cost;
  d["primary_link_cost"] = c.primary_link_cost;
  d["spare_link_cost"] = c.spare_link_cost;
  d["sar_cost"] = c.sar_cost;
  d["total"] = c.total;
  d["total_sar"] = c.total_sar;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "MEC core-network provisioning optimizer";

  m.def(
      "generate",
      [](const std::string& preset, std::uint64_t seed, const std::string& out_dir,
         int leaves, int cores, int bs_per_leaf, double area_km) {
        ScenarioParams p = preset_by_name(preset, seed);
        if (leaves > 0) p.n_leaf_dcs = leaves;
        if (cores >= 0) p.n_core_dcs = cores;
        if (bs_per_leaf > 0) p.bs_per_leaf = bs_per_leaf;
        if (area_km > 0) p.area_km = area_km;
        write_scenario(generate_scenario(p), out_dir);
      },
      py::arg("preset") = "tiny", py::arg("seed") = 1, py::arg("out_dir"),
      py::arg("leaves") = 0, py::arg("cores") = -1, py::arg("bs_per_leaf") = 0,
      py::arg("area_km") = 0.0,
      "Generate a synthetic scenario into out_dir "
      "(topology.json, demand.csv, handover.csv).");

  m.def(
      "validate",
      [](const std::string& scenario_dir) {
        auto rep = validate_scenario(scenario_dir + "/topology.json",
                                     scenario_dir + "/demand.csv",
                                     scenario_dir + "/handover.csv");
        return rep.violations;
      },
      py::arg("scenario_dir"),
      "Validate scenario files; returns the list of violations (empty = OK).");

  m.def(
      "solve",
      [](const std::string& scenario_dir, int hour, double budget_rtt_ms,
         double b_dc, double b_link, double b_sar, bool resilience,
         bool uncapacitated, int max_paths, int max_candidate_dcs,
         bool force_merge_to_one, const std::string& out_dir) {
        auto config = make_config(scenario_dir, hour, {budget_rtt_ms}, b_dc,
                                  b_link, b_sar, {}, resilience, uncapacitated,
                                  max_paths, max_candidate_dcs, false,
                                  force_merge_to_one, 1, out_dir);
        auto out = cmd_solve(config);
        py::dict d;
        d["costs"] = costs_dict(out.costs);
        ScenarioFiles sc = load_scenario_dir(scenario_dir);
        py::list clusters;
        for (const auto& c : out.plan.partition.clusters) {
          py::dict jc;
          jc["serving_dc"] = sc.topology.nodes()[c.serving_dc].id;
          py::list leaves;
          for (int l : c.leaves) leaves.append(sc.topology.nodes()[l].id);
          jc["leaves"] = leaves;
          clusters.append(jc);
        }
        d["clusters"] = clusters;
        d["n_primary_dcs"] = out.plan.n_primary_dcs();
        d["n_secondary_dcs"] = out.plan.n_secondary_dcs();
        return d;
      },
      py::arg("scenario_dir"), py::arg("hour") = 12,
      py::arg("budget_rtt_ms") = 10.0, py::arg("b_dc") = 1.0,
      py::arg("b_link") = 1.0, py::arg("b_sar") = 0.0,
      py::arg("resilience") = true, py::arg("uncapacitated") = true,
      py::arg("max_paths") = 4, py::arg("max_candidate_dcs") = 0,
      py::arg("force_merge_to_one") = false, py::arg("out_dir") = ".",
      "Run K-cut + greedy merge for one (hour, budget, b_sar) point; writes "
      "plan.json and trace.csv into out_dir and returns a summary dict.");

  m.def(
      "sweep",
      [](const std::string& scenario_dir, int hour, std::vector<double> budgets,
         std::vector<double> b_sar_grid, double b_dc, double b_link,
         bool resilience, bool oracle, int max_paths, int max_candidate_dcs,
         int jobs, const std::string& out_dir) {
        auto config = make_config(scenario_dir, hour, std::move(budgets), b_dc,
                                  b_link, 0.0, std::move(b_sar_grid), resilience,
                                  true, max_paths, max_candidate_dcs, oracle,
                                  false, jobs, out_dir);
        auto rows = cmd_sweep(config);
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["b_sar"] = r.b_sar;
          d["budget_rtt_ms"] = r.budget_rtt_ms;
          d["link_cost"] = r.link_cost;
          d["dc_cost"] = r.dc_cost;
          d["sar_cost"] = r.sar_cost;
          d["total"] = r.total;
          d["n_primary_dcs"] = r.n_primary_dcs;
          d["n_secondary_dcs"] = r.n_secondary_dcs;
          d["total_sar"] = r.total_sar;
          out.append(d);
        }
        return out;
      },
      py::arg("scenario_dir"), py::arg("hour") = 12,
      py::arg("budgets") = std::vector<double>{},
      py::arg("b_sar_grid") = std::vector<double>{}, py::arg("b_dc") = 1.0,
      py::arg("b_link") = 1.0, py::arg("resilience") = true,
      py::arg("oracle") = false, py::arg("max_paths") = 4,
      py::arg("max_candidate_dcs") = 0, py::arg("jobs") = 1,
      py::arg("out_dir") = ".",
      "Sweep the b_sar grid per budget; writes sweep.csv and returns rows.");

  m.def(
      "compare_fixed",
      [](const std::string& scenario_dir, const std::vector<std::string>& fixed_dcs,
         int hour, double budget_rtt_ms, const std::string& out_dir) {
        auto config = make_config(scenario_dir, hour, {budget_rtt_ms}, 1.0, 1.0,
                                  0.0, {}, true, true, 4, 0, false, false, 1,
                                  out_dir);
        auto rep = cmd_compare_fixed(config, fixed_dcs);
        py::dict d;
        d["covered_demand_fraction"] = rep.covered_demand_fraction;
        d["centralized_total_dc_mbps"] = rep.centralized_total_dc_mbps;
        d["distributed_total_dc_mbps"] = rep.distributed_total_dc_mbps;
        d["capacity_ratio"] = rep.capacity_ratio;
        d["dc_cost_curve"] = rep.dc_cost_curve;
        return d;
      },
      py::arg("scenario_dir"), py::arg("fixed_dcs"), py::arg("hour") = 12,
      py::arg("budget_rtt_ms") = 10.0, py::arg("out_dir") = ".",
      "Fixed 1+1 DC placement vs optimized placement; writes "
      "compare_fixed.json and returns the report.");

  m.def(
      "min_dc_cover",
      [](const std::string& scenario_dir, double budget_rtt_ms, bool exact) {
        ScenarioFiles sc = load_scenario_dir(scenario_dir);
        auto sam = service_areas(sc.topology, budget_rtt_ms);
        auto cover = min_dc_cover(sc.topology, sam,
                                  exact ? CoverMode::exact : CoverMode::greedy);
        std::vector<std::string> ids;
        for (int v : cover) ids.push_back(sc.topology.nodes()[v].id);
        return ids;
      },
      py::arg("scenario_dir"), py::arg("budget_rtt_ms") = 10.0,
      py::arg("exact") = false,
      "Minimum set of DC ids covering every base station within the budget.");
}
