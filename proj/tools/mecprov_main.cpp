// mecprov: MEC provisioning optimizer CLI.
//
// Subcommands: generate, validate, solve, sweep, compare-fixed, gap.
// Exit codes: 0 success, 1 infeasible, 2 usage/input error.

#include <algorithm>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "mec/experiments.hpp"
#include "mec/scenario.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  mec::SweepConfig config;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file");
  cmd->add_option("--scenario", f.config.scenario_dir, "scenario directory");
  cmd->add_option("--hour", f.config.hour, "hour of day (0-23)");
  cmd->add_option("--budget", f.config.budgets_rtt_ms,
                  "RTT latency budget(s) in ms");
  cmd->add_option("--b-dc", f.config.cost.b_dc, "DC capacity cost per Mbps");
  cmd->add_option("--b-link", f.config.cost.b_link,
                  "link cost per Mbps per distance unit");
  cmd->add_option("--b-sar", f.config.b_sar, "SAR cost per relocation");
  cmd->add_option("--b-sar-grid", f.config.b_sar_grid, "SAR cost sweep grid");
  cmd->add_flag("--no-resilience", [&f](size_t) { f.config.resilience = false; },
                "disable single-DC-failure spare provisioning");
  cmd->add_flag("--capacitated", [&f](size_t) { f.config.uncapacitated = false; },
                "enforce link/DC capacity caps");
  cmd->add_option("--max-paths", f.config.max_paths, "paths per (leaf, DC) pair");
  cmd->add_option("--max-candidate-dcs", f.config.max_candidate_dcs,
                  "trim DC(l) to the N closest DCs (0 = no trim)");
  cmd->add_flag("--oracle", f.config.oracle, "use the exact enumeration oracle");
  cmd->add_flag("--force-merge-to-one", f.config.force_merge_to_one,
                "merge best pairs all the way down to one cluster");
  cmd->add_option("--jobs", f.config.jobs, "concurrent solver instances");
  cmd->add_option("--out", f.config.out_dir, "output directory");
}

// The config file supplies defaults and explicit CLI flags override them, so
// the file is loaded into the bound struct before argv parsing.
std::string prescan_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MEC core-network provisioning optimizer"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "generate a synthetic scenario");
  std::string preset = "tiny";
  std::uint64_t seed = 1;
  std::string gen_out = "scenario";
  int n_leaf = 0, n_core = -1, bs_per_leaf = 0;
  double area = 0;
  gen->add_option("--preset", preset, "paper37 or tiny")->capture_default_str();
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--out", gen_out, "output directory");
  gen->add_option("--leaves", n_leaf, "override leaf DC count");
  gen->add_option("--cores", n_core, "override core DC count");
  gen->add_option("--bs-per-leaf", bs_per_leaf, "override BS count per leaf");
  gen->add_option("--area-km", area, "override square side in km");

  // validate
  auto* val = app.add_subcommand("validate", "validate scenario files");
  std::string val_dir;
  val->add_option("--scenario", val_dir, "scenario directory")->required();

  CommonFlags solve_f, sweep_f, cmp_f, gap_f;
  std::string cfg_path = prescan_config_path(argc, argv);
  if (!cfg_path.empty()) {
    try {
      mec::SweepConfig from_file = mec::load_sweep_config(cfg_path);
      solve_f.config = sweep_f.config = cmp_f.config = gap_f.config = from_file;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  auto* solve = app.add_subcommand("solve", "solve one (hour, budget, b_sar) point");
  add_common(solve, solve_f);
  auto* sweep = app.add_subcommand("sweep", "sweep the b_sar grid per budget");
  add_common(sweep, sweep_f);
  auto* cmp = app.add_subcommand("compare-fixed",
                                 "fixed 1+1 placement vs optimized MEC");
  add_common(cmp, cmp_f);
  std::vector<std::string> fixed_ids;
  cmp->add_option("--fixed-dcs", fixed_ids, "fixed DC node ids")->required();
  auto* gap = app.add_subcommand("gap", "greedy vs exact-oracle cost ratios");
  add_common(gap, gap_f);
  std::vector<std::uint64_t> gap_seeds = {1, 2, 3, 4, 5};
  std::string gap_preset = "tiny";
  gap->add_option("--seeds", gap_seeds, "scenario seeds");
  gap->add_option("--preset", gap_preset, "scenario preset for gap runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      mec::ScenarioParams params = mec::preset_by_name(preset, seed);
      if (n_leaf > 0) params.n_leaf_dcs = n_leaf;
      if (n_core >= 0) params.n_core_dcs = n_core;
      if (bs_per_leaf > 0) params.bs_per_leaf = bs_per_leaf;
      if (area > 0) params.area_km = area;
      mec::write_scenario(mec::generate_scenario(params), gen_out);
      std::cout << "wrote scenario to " << gen_out << "\n";
      return 0;
    }
    if (val->parsed()) {
      auto rep = mec::validate_scenario(val_dir + "/topology.json",
                                        val_dir + "/demand.csv",
                                        val_dir + "/handover.csv");
      for (const auto& v : rep.violations) std::cout << "violation: " << v << "\n";
      std::cout << (rep.ok() ? "scenario OK" : "scenario INVALID") << "\n";
      return rep.ok() ? 0 : 1;
    }
    if (solve->parsed()) {
      auto out = mec::cmd_solve(solve_f.config);
      std::printf("total=%.6f sar=%.6f n_serving_dcs=%zu\n", out.costs.total,
                  out.costs.total_sar, out.plan.partition.clusters.size());
      return 0;
    }
    if (sweep->parsed()) {
      auto rows = mec::cmd_sweep(sweep_f.config);
      std::cout << "wrote " << rows.size() << " sweep rows to "
                << sweep_f.config.out_dir << "/sweep.csv\n";
      return 0;
    }
    if (cmp->parsed()) {
      auto rep = mec::cmd_compare_fixed(cmp_f.config, fixed_ids);
      std::printf("coverage=%.4f capacity_ratio=%.4f\n",
                  rep.covered_demand_fraction, rep.capacity_ratio);
      return 0;
    }
    if (gap->parsed()) {
      mec::ScenarioParams base = mec::preset_by_name(gap_preset, 1);
      auto rep = mec::cmd_gap(gap_f.config, gap_seeds, base);
      double worst = 1.0;
      for (const auto& r : rep.rows) worst = std::max(worst, r.ratio);
      std::printf("points=%zu worst_ratio=%.4f greedy_s=%.3f oracle_s=%.3f\n",
                  rep.rows.size(), worst, rep.greedy_seconds, rep.oracle_seconds);
      return 0;
    }
  } catch (const mec::InfeasibleCoverage& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    for (const auto& id : e.uncovered_ids) std::cerr << "  uncovered: " << id << "\n";
    return 1;
  } catch (const mec::ProvisionError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
