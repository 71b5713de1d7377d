#pragma once

#include <map>
#include <vector>

#include "mec/demand.hpp"
#include "mec/topology.hpp"

namespace mec {

// Small undirected flow network; node ids are dense ints supplied by the
// caller. Deterministic for a fixed edge insertion order.
class FlowNetwork {
 public:
  explicit FlowNetwork(int n_nodes);

  void add_edge(int u, int v, double capacity);  // undirected
  int n_nodes() const { return (int)adj_.size(); }

  struct MinCut {
    double flow = 0.0;
    std::vector<char> source_side;       // per node
    std::vector<std::pair<int, int>> cut_edges;
  };

  // Max flow via Dinic; the returned source side is the residual-reachable set.
  MinCut max_flow_min_cut(int source, int sink);

 private:
  struct Arc {
    int to;
    double cap;
    int rev;
  };
  std::vector<std::vector<Arc>> adj_;
  std::vector<std::vector<double>> initial_cap_;

  bool bfs_levels(int s, int t, std::vector<int>& level);
  double dfs_push(int u, int t, double pushed, std::vector<int>& level,
                  std::vector<int>& iter);
};

struct CutResult {
  Partition partition;
  double cut_weight = 0.0;                  // symmetrized weight crossing clusters
  std::map<int, double> isolating_weights;  // terminal node -> its min isolating cut
};

// Union-of-isolating-cuts K-cut: per terminal, a min cut isolating it from the
// merged remainder; the single most expensive cut is dropped from the union.
CutResult isolating_kcut(const TopologyGraph& g, const HandoverGraph& h,
                         const std::vector<int>& terminals);

// Convenience: terminals = all leaf DCs.
CutResult isolating_kcut(const TopologyGraph& g, const HandoverGraph& h);

// Merges any terminal-free component into the neighboring cluster with the
// largest connecting weight. Idempotent on already-valid partitions.
CutResult repair_partition(const CutResult& c, const TopologyGraph& g,
                           const HandoverGraph& h);

}  // namespace mec
