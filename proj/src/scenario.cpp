#include "mec/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace mec {

void ScenarioParams::validate() const {
  if (n_leaf_dcs < 1 || n_core_dcs < 0 || bs_per_leaf < 1)
    throw std::runtime_error("scenario counts must be >= 1");
  if (area_km <= 0) throw std::runtime_error("scenario area must be positive");
  if (backbone_degree < 1) throw std::runtime_error("backbone degree must be >= 1");
  for (double f : diurnal)
    if (f < 0) throw std::runtime_error("diurnal factors must be >= 0");
}

ScenarioParams paper37_preset(std::uint64_t seed) {
  ScenarioParams p;
  p.n_leaf_dcs = 35;
  p.n_core_dcs = 2;
  p.bs_per_leaf = 57;  // ~2000 BSs
  p.area_km = 12.65;   // ~160 km^2
  p.backbone_degree = 2;
  p.seed = seed;
  return p;
}

ScenarioParams tiny_preset(std::uint64_t seed) {
  ScenarioParams p;
  p.n_leaf_dcs = 4;
  p.n_core_dcs = 1;
  p.bs_per_leaf = 5;
  p.area_km = 6.0;
  p.backbone_degree = 2;
  p.seed = seed;
  return p;
}

ScenarioParams preset_by_name(const std::string& name, std::uint64_t seed) {
  if (name == "paper37") return paper37_preset(seed);
  if (name == "tiny") return tiny_preset(seed);
  throw std::runtime_error("unknown scenario preset: " + name);
}

namespace {

struct P2 {
  double x, y;
};

double dist(const P2& a, const P2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Disjoint-set for backbone connectivity.
struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[a] = b;
    return true;
  }
};

}  // namespace

GeneratedScenario generate_scenario(const ScenarioParams& p) {
  p.validate();
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  // Leaf DCs on a jittered grid.
  int gdim = (int)std::ceil(std::sqrt((double)p.n_leaf_dcs));
  double cell = p.area_km / gdim;
  std::vector<P2> leaf_pos;
  for (int k = 0; k < p.n_leaf_dcs; ++k) {
    int gx = k % gdim, gy = k / gdim;
    double jx = (uni(rng) - 0.5) * 0.5 * cell;
    double jy = (uni(rng) - 0.5) * 0.5 * cell;
    leaf_pos.push_back({(gx + 0.5) * cell + jx, (gy + 0.5) * cell + jy});
  }
  std::vector<P2> core_pos;
  for (int k = 0; k < p.n_core_dcs; ++k) {
    double ang = 2.0 * M_PI * k / std::max(1, p.n_core_dcs);
    core_pos.push_back({p.area_km / 2 + 0.08 * p.area_km * std::cos(ang),
                        p.area_km / 2 + 0.08 * p.area_km * std::sin(ang)});
  }

  // BSs clustered around their generating leaf.
  std::normal_distribution<double> gauss(0.0, 0.3 * cell);
  int n_bs = p.n_leaf_dcs * p.bs_per_leaf;
  std::vector<P2> bs_pos;
  for (int l = 0; l < p.n_leaf_dcs; ++l) {
    for (int k = 0; k < p.bs_per_leaf; ++k) {
      double x = std::clamp(leaf_pos[l].x + gauss(rng), 0.0, p.area_km);
      double y = std::clamp(leaf_pos[l].y + gauss(rng), 0.0, p.area_km);
      bs_pos.push_back({x, y});
    }
  }

  auto leaf_id = [](int k) { return "leaf" + std::to_string(k); };
  auto core_id = [](int k) { return "core" + std::to_string(k); };
  auto bs_id = [](int k) { return "bs" + std::to_string(k); };

  std::vector<Node> nodes;
  for (int k = 0; k < p.n_leaf_dcs; ++k)
    nodes.push_back({leaf_id(k), NodeKind::leaf_dc, leaf_pos[k].x, leaf_pos[k].y});
  for (int k = 0; k < p.n_core_dcs; ++k)
    nodes.push_back({core_id(k), NodeKind::core_dc, core_pos[k].x, core_pos[k].y});
  for (int k = 0; k < n_bs; ++k)
    nodes.push_back({bs_id(k), NodeKind::base_station, bs_pos[k].x, bs_pos[k].y});

  std::vector<Link> links;
  std::set<std::pair<int, int>> backbone;  // leaf/core indices into a DC list
  std::vector<P2> dc_pos = leaf_pos;
  dc_pos.insert(dc_pos.end(), core_pos.begin(), core_pos.end());
  auto dc_name = [&](int k) {
    return k < p.n_leaf_dcs ? leaf_id(k) : core_id(k - p.n_leaf_dcs);
  };
  auto add_backbone = [&](int a, int b) {
    if (a == b) return;
    auto key = std::minmax(a, b);
    if (!backbone.insert({key.first, key.second}).second) return;
    links.push_back({dc_name(a), dc_name(b), dist(dc_pos[a], dc_pos[b]), 0.0,
                     kUnbounded});
  };

  // Each leaf to its nearest leaves; cores to their nearest leaves and to
  // each other.
  for (int a = 0; a < p.n_leaf_dcs; ++a) {
    std::vector<int> order;
    for (int b = 0; b < p.n_leaf_dcs; ++b)
      if (b != a) order.push_back(b);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      double dx = dist(leaf_pos[a], leaf_pos[x]);
      double dy = dist(leaf_pos[a], leaf_pos[y]);
      return std::tie(dx, x) < std::tie(dy, y);
    });
    for (int k = 0; k < std::min(p.backbone_degree, (int)order.size()); ++k)
      add_backbone(a, order[k]);
  }
  for (int c = 0; c < p.n_core_dcs; ++c) {
    int ci = p.n_leaf_dcs + c;
    std::vector<int> order(p.n_leaf_dcs);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      double dx = dist(core_pos[c], leaf_pos[x]);
      double dy = dist(core_pos[c], leaf_pos[y]);
      return std::tie(dx, x) < std::tie(dy, y);
    });
    for (int k = 0; k < std::min(3, (int)order.size()); ++k)
      add_backbone(ci, order[k]);
    for (int c2 = 0; c2 < c; ++c2) add_backbone(ci, p.n_leaf_dcs + c2);
  }
  // Stitch any remaining backbone components together via closest pairs.
  {
    int n_dc = (int)dc_pos.size();
    Dsu dsu(n_dc);
    for (const auto& [a, b] : backbone) dsu.unite(a, b);
    while (true) {
      int best_a = -1, best_b = -1;
      double best_d = 0.0;
      for (int a = 0; a < n_dc; ++a)
        for (int b = a + 1; b < n_dc; ++b) {
          if (dsu.find(a) == dsu.find(b)) continue;
          double d = dist(dc_pos[a], dc_pos[b]);
          if (best_a == -1 || d < best_d) {
            best_d = d;
            best_a = a;
            best_b = b;
          }
        }
      if (best_a == -1) break;
      add_backbone(best_a, best_b);
      dsu.unite(best_a, best_b);
    }
  }

  // Backhaul: each BS to its nearest leaf.
  for (int k = 0; k < n_bs; ++k) {
    int best = 0;
    double best_d = dist(bs_pos[k], leaf_pos[0]);
    for (int l = 1; l < p.n_leaf_dcs; ++l) {
      double d = dist(bs_pos[k], leaf_pos[l]);
      if (d < best_d) {
        best_d = d;
        best = l;
      }
    }
    links.push_back({bs_id(k), leaf_id(best), std::max(best_d, 1e-3), 0.0,
                     kUnbounded});
  }

  GeneratedScenario out{build_topology(nodes, links), {}, {}};

  // Heavy-tailed per-BS demand scale, shared across hours.
  std::lognormal_distribution<double> logn(0.0, 0.5);
  std::vector<double> scale(n_bs);
  for (int k = 0; k < n_bs; ++k) scale[k] = logn(rng);
  for (int k = 0; k < n_bs; ++k)
    for (int h = 0; h < 24; ++h)
      out.demand.rows.push_back(
          {bs_id(k), h, p.base_demand_mbps * scale[k] * p.diurnal[h]});

  // Handover edges between geographically-adjacent BSs; rate scales with the
  // product of endpoint demands.
  double mean_spacing = p.area_km / std::sqrt((double)n_bs);
  double radius = p.adjacency_radius_factor * mean_spacing;
  for (int i = 0; i < n_bs; ++i) {
    for (int j = i + 1; j < n_bs; ++j) {
      if (dist(bs_pos[i], bs_pos[j]) > radius) continue;
      double affinity = scale[i] * scale[j];
      double asym = 0.8 + 0.4 * uni(rng);  // directional imbalance
      for (int h = 0; h < 24; ++h) {
        double base = p.base_handover_rate * affinity * p.diurnal[h];
        if (base <= 0) continue;
        out.handover.push_back({bs_id(i), bs_id(j), h, base * asym});
        out.handover.push_back({bs_id(j), bs_id(i), h, base * (2.0 - asym)});
      }
    }
  }
  return out;
}

void write_scenario(const GeneratedScenario& s, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  save_topology(s.topology, out_dir + "/topology.json");
  s.demand.save_csv(out_dir + "/demand.csv");
  save_handover_csv(s.handover, out_dir + "/handover.csv");
}

ValidationReport validate_scenario(const std::string& topology_path,
                                   const std::string& demand_path,
                                   const std::string& handover_path) {
  ValidationReport rep;
  try {
    TopologyGraph g = load_topology(topology_path);
    try {
      DemandProfile d = DemandProfile::load_csv(demand_path);
      for (const auto& r : d.rows) {
        auto idx = g.find(r.bs_id);
        if (!idx)
          rep.violations.push_back("demand row references unknown BS: " + r.bs_id);
        else if (g.nodes()[*idx].kind != NodeKind::base_station)
          rep.violations.push_back("demand row for non-BS node: " + r.bs_id);
        if (r.demand_mbps < 0)
          rep.violations.push_back("negative demand for BS " + r.bs_id);
      }
    } catch (const std::exception& e) {
      rep.violations.push_back(e.what());
    }
    try {
      auto ho = load_handover_csv(handover_path);
      for (const auto& r : ho) {
        for (const std::string* id : {&r.src_bs, &r.dst_bs}) {
          auto idx = g.find(*id);
          if (!idx)
            rep.violations.push_back("handover row references unknown BS: " + *id);
          else if (g.nodes()[*idx].kind != NodeKind::base_station)
            rep.violations.push_back("handover row endpoint is not a BS: " + *id);
        }
        if (r.ho_per_hour < 0)
          rep.violations.push_back("negative handover rate " + r.src_bs + "->" +
                                   r.dst_bs);
      }
    } catch (const std::exception& e) {
      rep.violations.push_back(e.what());
    }
  } catch (const std::exception& e) {
    rep.violations.push_back(e.what());
  }
  return rep;
}

}  // namespace mec
