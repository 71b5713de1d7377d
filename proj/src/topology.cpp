#include "mec/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mec {

using nlohmann::json;

NodeKind parse_node_kind(const std::string& s) {
  if (s == "base_station") return NodeKind::base_station;
  if (s == "leaf_dc") return NodeKind::leaf_dc;
  if (s == "core_dc") return NodeKind::core_dc;
  throw std::runtime_error("unknown node kind: " + s);
}

std::string to_string(NodeKind k) {
  switch (k) {
    case NodeKind::base_station: return "base_station";
    case NodeKind::leaf_dc: return "leaf_dc";
    case NodeKind::core_dc: return "core_dc";
  }
  return "?";
}

int TopologyGraph::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::runtime_error("unknown node id: " + id);
  return it->second;
}

std::optional<int> TopologyGraph::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TopologyGraph build_topology(std::vector<Node> nodes, std::vector<Link> links,
                             double propagation_us_per_km) {
  TopologyGraph g;
  g.nodes_ = std::move(nodes);
  for (int i = 0; i < (int)g.nodes_.size(); ++i) {
    const auto& n = g.nodes_[i];
    if (!g.index_.emplace(n.id, i).second)
      throw std::runtime_error("duplicate node id: " + n.id);
    if (n.is_dc()) g.dcs_.push_back(i);
    if (n.kind == NodeKind::base_station) g.bss_.push_back(i);
    if (n.kind == NodeKind::leaf_dc) g.leafs_.push_back(i);
  }

  g.links_ = std::move(links);
  g.adj_.resize(g.nodes_.size());
  for (int e = 0; e < (int)g.links_.size(); ++e) {
    Link& l = g.links_[e];
    int ia = g.index_of(l.a);
    int ib = g.index_of(l.b);
    if (ia == ib) throw std::runtime_error("self-loop link at node " + l.a);
    if (l.distance_km < 0)
      throw std::runtime_error("negative link distance on " + l.a + "-" + l.b);
    if (l.distance_km == 0 && l.latency_us_oneway == 0) {
      const Node& na = g.nodes_[ia];
      const Node& nb = g.nodes_[ib];
      l.distance_km = std::hypot(na.x_km - nb.x_km, na.y_km - nb.y_km);
    }
    if (l.latency_us_oneway == 0)
      l.latency_us_oneway = l.distance_km * propagation_us_per_km;
    if (l.latency_us_oneway < 0)
      throw std::runtime_error("negative link latency on " + l.a + "-" + l.b);
    if (l.capacity_mbps <= 0)
      throw std::runtime_error("non-positive link capacity on " + l.a + "-" + l.b);
    g.adj_[ia].push_back({e, ib});
    g.adj_[ib].push_back({e, ia});
  }
  for (auto& a : g.adj_)
    std::sort(a.begin(), a.end(),
              [](const TopologyGraph::Adj& x, const TopologyGraph::Adj& y) {
                return std::tie(x.other, x.link) < std::tie(y.other, y.link);
              });

  // Backhaul attachment: every BS needs exactly one leaf-DC neighbor.
  g.backhaul_leaf_.assign(g.nodes_.size(), -1);
  g.rooted_.resize(g.nodes_.size());
  for (int bs : g.bss_) {
    int leaf = -1;
    for (const auto& a : g.adj_[bs]) {
      if (g.nodes_[a.other].kind == NodeKind::leaf_dc) {
        if (leaf != -1 && leaf != a.other)
          throw std::runtime_error("BS " + g.nodes_[bs].id +
                                   " attached to multiple leaf DCs");
        leaf = a.other;
      }
    }
    if (leaf == -1)
      throw std::runtime_error("BS with no leaf-DC attachment: " + g.nodes_[bs].id);
    g.backhaul_leaf_[bs] = leaf;
    g.rooted_[leaf].push_back(bs);
  }

  if (!g.nodes_.empty()) {
    std::vector<char> seen(g.nodes_.size(), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    size_t reached = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (const auto& a : g.adj_[u])
        if (!seen[a.other]) {
          seen[a.other] = 1;
          ++reached;
          q.push(a.other);
        }
    }
    if (reached != g.nodes_.size())
      throw std::runtime_error("topology graph is disconnected");
  }
  return g;
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const char* what) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok)
      throw std::runtime_error(std::string("unknown field '") + it.key() +
                               "' in " + what);
  }
}

}  // namespace

TopologyGraph parse_topology(const std::string& json_text,
                             double propagation_us_per_km) {
  json j = json::parse(json_text);
  reject_unknown(j, {"nodes", "links"}, "topology file");
  std::vector<Node> nodes;
  for (const auto& jn : j.at("nodes")) {
    reject_unknown(jn, {"id", "kind", "x_km", "y_km"}, "node record");
    Node n;
    n.id = jn.at("id").get<std::string>();
    n.kind = parse_node_kind(jn.at("kind").get<std::string>());
    n.x_km = jn.at("x_km").get<double>();
    n.y_km = jn.at("y_km").get<double>();
    nodes.push_back(std::move(n));
  }
  std::vector<Link> links;
  for (const auto& jl : j.at("links")) {
    reject_unknown(jl, {"a", "b", "distance_km", "latency_us", "capacity_mbps"},
                   "link record");
    Link l;
    l.a = jl.at("a").get<std::string>();
    l.b = jl.at("b").get<std::string>();
    if (jl.contains("distance_km")) l.distance_km = jl["distance_km"].get<double>();
    if (jl.contains("latency_us")) l.latency_us_oneway = jl["latency_us"].get<double>();
    if (jl.contains("capacity_mbps")) l.capacity_mbps = jl["capacity_mbps"].get<double>();
    links.push_back(std::move(l));
  }
  return build_topology(std::move(nodes), std::move(links), propagation_us_per_km);
}

TopologyGraph load_topology(const std::string& path, double propagation_us_per_km) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open topology file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_topology(ss.str(), propagation_us_per_km);
}

void save_topology(const TopologyGraph& g, const std::string& path) {
  json j;
  j["nodes"] = json::array();
  for (const auto& n : g.nodes()) {
    j["nodes"].push_back(
        {{"id", n.id}, {"kind", to_string(n.kind)}, {"x_km", n.x_km}, {"y_km", n.y_km}});
  }
  j["links"] = json::array();
  for (const auto& l : g.links()) {
    json jl = {{"a", l.a},
               {"b", l.b},
               {"distance_km", l.distance_km},
               {"latency_us", l.latency_us_oneway}};
    if (l.capacity_mbps != kUnbounded) jl["capacity_mbps"] = l.capacity_mbps;
    j["links"].push_back(std::move(jl));
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write topology file: " + path);
  out << j.dump(2) << "\n";
}

std::vector<double> shortest_latency_us(const TopologyGraph& g, int src) {
  std::vector<double> dist(g.nodes().size(), kUnbounded);
  dist[src] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (const auto& a : g.neighbors(u)) {
      double nd = d + g.links()[a.link].latency_us_oneway;
      if (nd < dist[a.other]) {
        dist[a.other] = nd;
        pq.push({nd, a.other});
      }
    }
  }
  return dist;
}

namespace {

struct PathBuild {
  std::vector<int> node_seq;
  std::vector<int> link_seq;
  double latency_us = 0.0;
  double distance_km = 0.0;
};

Path finish_path(const PathBuild& b) {
  Path p;
  p.node_seq = b.node_seq;
  p.link_seq = b.link_seq;
  p.latency_rtt_ms = 2.0 * b.latency_us / 1000.0;
  p.distance_km = b.distance_km;
  p.cost_per_mbps = b.distance_km;  // unit cost per Mbps-km
  return p;
}

bool path_less(const Path& x, const Path& y) {
  return std::tie(x.cost_per_mbps, x.latency_rtt_ms, x.node_seq) <
         std::tie(y.cost_per_mbps, y.latency_rtt_ms, y.node_seq);
}

}  // namespace

std::vector<Path> feasible_paths(const TopologyGraph& g, const std::string& src,
                                 const std::string& dc, double budget_rtt_ms,
                                 int max_paths) {
  return feasible_paths(g, g.index_of(src), g.index_of(dc), budget_rtt_ms, max_paths);
}

std::vector<Path> feasible_paths(const TopologyGraph& g, int src, int dc,
                                 double budget_rtt_ms, int max_paths) {
  if (src < 0 || src >= (int)g.nodes().size() || dc < 0 || dc >= (int)g.nodes().size())
    throw std::runtime_error("unknown node id in feasible_paths");
  if (src == dc) {
    Path p;
    p.node_seq = {src};
    return {p};
  }

  // DFS over simple paths, pruned by remaining shortest latency to the target.
  std::vector<double> rest = shortest_latency_us(g, dc);
  const double budget_us = budget_rtt_ms * 1000.0 / 2.0;
  std::vector<Path> found;
  std::vector<char> on_path(g.nodes().size(), 0);
  PathBuild cur;
  cur.node_seq = {src};
  on_path[src] = 1;
  constexpr size_t kEnumCap = 20000;

  auto dfs = [&](auto&& self, int u) -> void {
    if (found.size() >= kEnumCap) return;
    if (u == dc) {
      found.push_back(finish_path(cur));
      return;
    }
    for (const auto& a : g.neighbors(u)) {
      if (on_path[a.other]) continue;
      const Link& l = g.links()[a.link];
      double nl = cur.latency_us + l.latency_us_oneway;
      if (nl + rest[a.other] > budget_us + 1e-12) continue;
      on_path[a.other] = 1;
      cur.node_seq.push_back(a.other);
      cur.link_seq.push_back(a.link);
      cur.latency_us = nl;
      cur.distance_km += l.distance_km;
      self(self, a.other);
      cur.distance_km -= l.distance_km;
      cur.latency_us -= l.latency_us_oneway;
      cur.link_seq.pop_back();
      cur.node_seq.pop_back();
      on_path[a.other] = 0;
    }
  };
  dfs(dfs, src);

  std::sort(found.begin(), found.end(), path_less);
  if ((int)found.size() > max_paths) found.resize(max_paths);
  return found;
}

bool ServiceAreaMap::covers(int dc, int node) const {
  auto it = sa_of.find(dc);
  if (it == sa_of.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(), node);
}

double ServiceAreaMap::bs_coverage_fraction(const TopologyGraph& g) const {
  if (g.bs_nodes().empty()) return 1.0;
  int covered = 0;
  for (int bs : g.bs_nodes()) {
    auto it = dc_of.find(bs);
    if (it != dc_of.end() && !it->second.empty()) ++covered;
  }
  return double(covered) / double(g.bs_nodes().size());
}

ServiceAreaMap service_areas(const TopologyGraph& g, double budget_rtt_ms) {
  if (budget_rtt_ms <= 0) throw std::runtime_error("latency budget must be positive");
  ServiceAreaMap sam;
  sam.budget_rtt_ms = budget_rtt_ms;
  for (int v : g.dc_nodes()) {
    std::vector<double> dist = shortest_latency_us(g, v);
    auto& sa = sam.sa_of[v];
    for (int u = 0; u < (int)g.nodes().size(); ++u) {
      if (g.nodes()[u].kind == NodeKind::core_dc) continue;
      double rtt = 2.0 * dist[u] / 1000.0;
      if (rtt <= budget_rtt_ms + 1e-12) {
        sa.push_back(u);
        sam.dc_of[u].push_back(v);
        sam.rtt_ms[{u, v}] = rtt;
      }
    }
  }
  // Keys for every BS and leaf, even when uncovered.
  for (int u : g.bs_nodes()) sam.dc_of[u];
  for (int u : g.leaf_dc_nodes()) sam.dc_of[u];
  return sam;
}

namespace {

std::vector<int> uncovered_check(const TopologyGraph& g, const ServiceAreaMap& sam) {
  std::vector<int> bad;
  for (int bs : g.bs_nodes()) {
    auto it = sam.dc_of.find(bs);
    if (it == sam.dc_of.end() || it->second.empty()) bad.push_back(bs);
  }
  return bad;
}

}  // namespace

std::vector<int> min_dc_cover(const TopologyGraph& g, const ServiceAreaMap& sam,
                              CoverMode mode) {
  auto bad = uncovered_check(g, sam);
  if (!bad.empty())
    throw std::runtime_error("uncoverable BS exists: " + g.nodes()[bad[0]].id);

  std::vector<int> dcs;
  std::vector<std::set<int>> covers;  // BS sets per DC
  for (int v : g.dc_nodes()) {
    std::set<int> c;
    auto it = sam.sa_of.find(v);
    if (it != sam.sa_of.end())
      for (int u : it->second)
        if (g.nodes()[u].kind == NodeKind::base_station) c.insert(u);
    if (!c.empty()) {
      dcs.push_back(v);
      covers.push_back(std::move(c));
    }
  }
  std::set<int> all_bs(g.bs_nodes().begin(), g.bs_nodes().end());
  if (all_bs.empty()) return {};

  if (mode == CoverMode::greedy) {
    std::set<int> left = all_bs;
    std::vector<int> picked;
    while (!left.empty()) {
      int best = -1;
      size_t best_gain = 0;
      for (int k = 0; k < (int)dcs.size(); ++k) {
        size_t gain = 0;
        for (int u : covers[k])
          if (left.count(u)) ++gain;
        if (gain > best_gain) {
          best_gain = gain;
          best = k;
        }
      }
      if (best == -1) throw std::runtime_error("uncoverable BS exists");
      picked.push_back(dcs[best]);
      for (int u : covers[best]) left.erase(u);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
  }

  // Exact: iterative deepening over subset sizes, pruned DFS. Intended for
  // instances with at most a few dozen DCs.
  int n = (int)dcs.size();
  std::vector<int> choice, best_sol;
  for (int target = 1; target <= n; ++target) {
    std::set<int> left = all_bs;
    // Branch on which DC covers the first uncovered BS; the chosen set fixes
    // the branching sequence, so no duplicate subsets are explored.
    auto dfs = [&](auto&& self, int remaining) -> bool {
      if (left.empty()) {
        best_sol = choice;
        return true;
      }
      if (remaining == 0) return false;
      int need = *left.begin();
      for (int k = 0; k < n; ++k) {
        if (!covers[k].count(need)) continue;
        std::vector<int> newly;
        for (int u : covers[k])
          if (left.erase(u)) newly.push_back(u);
        choice.push_back(dcs[k]);
        if (self(self, remaining - 1)) return true;
        choice.pop_back();
        for (int u : newly) left.insert(u);
      }
      return false;
    };
    if (dfs(dfs, target)) break;
  }
  std::sort(best_sol.begin(), best_sol.end());
  return best_sol;
}

}  // namespace mec
