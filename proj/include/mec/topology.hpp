#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace mec {

constexpr double kUnbounded = std::numeric_limits<double>::infinity();
constexpr double kDefaultPropagationUsPerKm = 5.0;

enum class NodeKind { base_station, leaf_dc, core_dc };

NodeKind parse_node_kind(const std::string& s);
std::string to_string(NodeKind k);

struct Node {
  std::string id;
  NodeKind kind = NodeKind::base_station;
  double x_km = 0.0;
  double y_km = 0.0;

  bool is_dc() const { return kind != NodeKind::base_station; }
};

struct Link {
  std::string a;
  std::string b;
  double distance_km = 0.0;
  double latency_us_oneway = 0.0;  // filled from distance when omitted
  double capacity_mbps = kUnbounded;
};

// Immutable after build_topology(); index-based adjacency over stable node
// ordering so downstream algorithms are deterministic.
class TopologyGraph {
 public:
  struct Adj {
    int link = -1;   // index into links()
    int other = -1;  // neighbor node index
  };

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const std::vector<Adj>& neighbors(int node) const { return adj_[node]; }

  int index_of(const std::string& id) const;        // throws on unknown id
  std::optional<int> find(const std::string& id) const;

  const std::vector<int>& dc_nodes() const { return dcs_; }
  const std::vector<int>& bs_nodes() const { return bss_; }
  const std::vector<int>& leaf_dc_nodes() const { return leafs_; }

  // Backhaul leaf DC of a BS node; -1 for non-BS nodes.
  int backhaul_leaf(int bs) const { return backhaul_leaf_[bs]; }
  // BSs rooted at a leaf DC (the BS(l) set); empty for other nodes.
  const std::vector<int>& rooted_bss(int leaf) const { return rooted_[leaf]; }

  friend TopologyGraph build_topology(std::vector<Node> nodes,
                                      std::vector<Link> links,
                                      double propagation_us_per_km);

 private:
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<std::vector<Adj>> adj_;
  std::unordered_map<std::string, int> index_;
  std::vector<int> dcs_, bss_, leafs_;
  std::vector<int> backhaul_leaf_;
  std::vector<std::vector<int>> rooted_;
};

// Validates ids, connectivity and BS attachment; fills missing link latency
// from distance and missing distance from Euclidean node positions.
TopologyGraph build_topology(std::vector<Node> nodes, std::vector<Link> links,
                             double propagation_us_per_km = kDefaultPropagationUsPerKm);

// Topology JSON: {"nodes":[{id,kind,x_km,y_km}],"links":[{a,b,...}]}.
// Unknown fields rejected.
TopologyGraph load_topology(const std::string& path,
                            double propagation_us_per_km = kDefaultPropagationUsPerKm);
TopologyGraph parse_topology(const std::string& json_text,
                             double propagation_us_per_km = kDefaultPropagationUsPerKm);
void save_topology(const TopologyGraph& g, const std::string& path);

struct Path {
  std::vector<int> link_seq;   // link indices, in order from src
  std::vector<int> node_seq;   // node indices, node_seq.front() == src
  double latency_rtt_ms = 0.0;
  double distance_km = 0.0;
  // Link cost of pushing 1 Mbps over the path at unit cost per Mbps-km.
  double cost_per_mbps = 0.0;
};

// Up to max_paths simple paths src->dc within the RTT budget, cheapest first.
std::vector<Path> feasible_paths(const TopologyGraph& g, const std::string& src,
                                 const std::string& dc, double budget_rtt_ms,
                                 int max_paths = 4);
std::vector<Path> feasible_paths(const TopologyGraph& g, int src, int dc,
                                 double budget_rtt_ms, int max_paths = 4);

struct ServiceAreaMap {
  double budget_rtt_ms = 0.0;
  // Keyed by node index. dc_of covers BS and leaf-DC nodes (the DC(i) sets);
  // sa_of maps each DC to the BS/leaf nodes it covers (SA(v)).
  std::map<int, std::vector<int>> dc_of;
  std::map<int, std::vector<int>> sa_of;
  // Min RTT (ms) between any (bs-or-leaf, dc) member pair.
  std::map<std::pair<int, int>, double> rtt_ms;

  bool covers(int dc, int node) const;
  // Fraction of BS nodes with nonempty DC(i).
  double bs_coverage_fraction(const TopologyGraph& g) const;
};

ServiceAreaMap service_areas(const TopologyGraph& g, double budget_rtt_ms);

enum class CoverMode { exact, greedy };

// Minimum set of DCs whose service areas jointly cover every BS.
std::vector<int> min_dc_cover(const TopologyGraph& g, const ServiceAreaMap& sam,
                              CoverMode mode);

// One-way shortest latency (us) from src to every node; unreachable = +inf.
std::vector<double> shortest_latency_us(const TopologyGraph& g, int src);

}  // namespace mec
