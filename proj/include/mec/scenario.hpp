#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mec/demand.hpp"
#include "mec/topology.hpp"

namespace mec {

struct ScenarioParams {
  int n_leaf_dcs = 4;
  int n_core_dcs = 1;
  int bs_per_leaf = 5;
  double area_km = 10.0;  // square side
  int backbone_degree = 2;
  std::array<double, 24> diurnal = {0.35, 0.3, 0.25, 0.22, 0.22, 0.25, 0.35, 0.55,
                                    0.75, 0.85, 0.9,  0.95, 1.0,  1.0,  0.95, 0.9,
                                    0.9,  0.95, 1.0,  0.95, 0.85, 0.7,  0.55, 0.45};
  double base_demand_mbps = 100.0;
  double base_handover_rate = 50.0;  // handovers/hour between busy neighbors
  double adjacency_radius_factor = 1.5;  // x mean inter-BS spacing
  std::uint64_t seed = 1;

  void validate() const;  // throws on bad counts/area
};

// paper-scale preset: 35 leaf + 2 core DCs, 2000 BSs, ~100 backbone links
// over a ~12.65 km square.
ScenarioParams paper37_preset(std::uint64_t seed = 1);
// 4 leaves + 1 core, 20 BSs; small enough for the exact oracle.
ScenarioParams tiny_preset(std::uint64_t seed = 1);
ScenarioParams preset_by_name(const std::string& name, std::uint64_t seed = 1);

struct GeneratedScenario {
  TopologyGraph topology;
  DemandProfile demand;
  std::vector<HandoverRecord> handover;
};

GeneratedScenario generate_scenario(const ScenarioParams& p);

// Writes topology.json, demand.csv, handover.csv into out_dir.
void write_scenario(const GeneratedScenario& s, const std::string& out_dir);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_scenario(const std::string& topology_path,
                                   const std::string& demand_path,
                                   const std::string& handover_path);

}  // namespace mec
