#pragma once

#include <map>
#include <string>
#include <vector>

#include "mec/topology.hpp"

namespace mec {

// Per-BS, per-hour traffic demand (Mbps).
struct DemandProfile {
  struct Row {
    std::string bs_id;
    int hour = 0;
    double demand_mbps = 0.0;
  };
  std::vector<Row> rows;

  // CSV with strict header: bs_id,hour,demand_mbps
  static DemandProfile load_csv(const std::string& path);
  void save_csv(const std::string& path) const;
};

struct HandoverRecord {
  std::string src_bs;
  std::string dst_bs;
  int hour = 0;
  double ho_per_hour = 0.0;
};

// CSV with strict header: src_bs,dst_bs,hour,ho_per_hour
std::vector<HandoverRecord> load_handover_csv(const std::string& path);
void save_handover_csv(const std::vector<HandoverRecord>& recs,
                       const std::string& path);

// Handover graph for one hour: directed BS-BS rate edges plus undirected
// backhaul edges carrying a uniform weight larger than the total rate mass,
// so cuts never separate a BS from its leaf.
struct HandoverGraph {
  int hour = 0;
  std::map<std::pair<int, int>, double> rate;  // (src, dst) -> lambda
  std::map<int, std::vector<int>> neighbors;   // N(i), both directions
  double total_rate = 0.0;
  double backhaul_weight = 0.0;

  double lambda(int i, int j) const {
    auto it = rate.find({i, j});
    return it == rate.end() ? 0.0 : it->second;
  }
  // Symmetrized weight used for cutting.
  double cut_weight(int i, int j) const { return lambda(i, j) + lambda(j, i); }
};

HandoverGraph build_handover_graph(const TopologyGraph& g,
                                   const std::vector<HandoverRecord>& records,
                                   int hour);

// Leaf-level demand aggregates h_l for one hour.
std::map<int, double> aggregate_demand(const DemandProfile& profile,
                                       const TopologyGraph& g, int hour);

struct Cluster {
  std::vector<int> leaves;  // member leaf DCs
  std::vector<int> bss;     // member BSs (those rooted at the leaves)
  int serving_dc = -1;
};

struct Partition {
  std::vector<Cluster> clusters;

  int cluster_of(int node) const;  // -1 when the node is in no cluster
  void rebuild_index(int n_nodes);

  // Leaf -> serving DC map (the x_{l,v} assignment).
  std::map<int, int> assignment() const;

 private:
  std::vector<int> index_;
};

// Partition whose every cluster is one leaf serving itself.
Partition fully_distributed_partition(const TopologyGraph& g);

struct SarMatrix {
  // Directed inter-cluster totals keyed by (serving DC of i, serving DC of j).
  std::map<std::pair<int, int>, double> by_cluster;
  // Per-BS-pair relocation rates (nonzero entries only).
  std::map<std::pair<int, int>, double> by_bs_pair;
  double total = 0.0;

  double between(int v, int u) const;  // symmetrized: (v,u) + (u,v)
};

SarMatrix inter_cluster_sar(const Partition& p, const HandoverGraph& h,
                            const TopologyGraph& g);

}  // namespace mec
