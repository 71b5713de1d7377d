#include "mec/multiway_cut.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

namespace mec {

namespace {
constexpr double kFlowEps = 1e-12;
}

FlowNetwork::FlowNetwork(int n_nodes) : adj_(n_nodes) {}

void FlowNetwork::add_edge(int u, int v, double capacity) {
  if (u == v || capacity <= 0) return;
  Arc a{v, capacity, (int)adj_[v].size()};
  Arc b{u, capacity, (int)adj_[u].size()};
  adj_[u].push_back(a);
  adj_[v].push_back(b);
}

bool FlowNetwork::bfs_levels(int s, int t, std::vector<int>& level) {
  level.assign(adj_.size(), -1);
  std::queue<int> q;
  level[s] = 0;
  q.push(s);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (const Arc& a : adj_[u]) {
      if (a.cap > kFlowEps && level[a.to] == -1) {
        level[a.to] = level[u] + 1;
        q.push(a.to);
      }
    }
  }
  return level[t] != -1;
}

double FlowNetwork::dfs_push(int u, int t, double pushed, std::vector<int>& level,
                             std::vector<int>& iter) {
  if (u == t) return pushed;
  for (int& i = iter[u]; i < (int)adj_[u].size(); ++i) {
    Arc& a = adj_[u][i];
    if (a.cap > kFlowEps && level[a.to] == level[u] + 1) {
      double got = dfs_push(a.to, t, std::min(pushed, a.cap), level, iter);
      if (got > kFlowEps) {
        a.cap -= got;
        adj_[a.to][a.rev].cap += got;
        return got;
      }
    }
  }
  return 0.0;
}

FlowNetwork::MinCut FlowNetwork::max_flow_min_cut(int source, int sink) {
  if (source == sink) throw std::runtime_error("max-flow source equals sink");
  // Snapshot pre-flow capacities so cut edges can be identified afterwards.
  std::vector<std::vector<double>> before(adj_.size());
  for (size_t u = 0; u < adj_.size(); ++u) {
    before[u].reserve(adj_[u].size());
    for (const Arc& a : adj_[u]) before[u].push_back(a.cap);
  }

  MinCut res;
  std::vector<int> level, iter;
  while (bfs_levels(source, sink, level)) {
    iter.assign(adj_.size(), 0);
    while (true) {
      double got = dfs_push(source, sink, kUnbounded, level, iter);
      if (got <= kFlowEps) break;
      res.flow += got;
    }
  }

  // Source side = residual-reachable from source.
  res.source_side.assign(adj_.size(), 0);
  std::queue<int> q;
  q.push(source);
  res.source_side[source] = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (const Arc& a : adj_[u])
      if (a.cap > kFlowEps && !res.source_side[a.to]) {
        res.source_side[a.to] = 1;
        q.push(a.to);
      }
  }
  std::set<std::pair<int, int>> seen;
  for (int u = 0; u < (int)adj_.size(); ++u) {
    if (!res.source_side[u]) continue;
    for (size_t i = 0; i < adj_[u].size(); ++i) {
      const Arc& a = adj_[u][i];
      if (res.source_side[a.to] || before[u][i] <= 0) continue;
      auto key = std::minmax(u, a.to);
      if (seen.insert({key.first, key.second}).second)
        res.cut_edges.push_back({key.first, key.second});
    }
  }
  std::sort(res.cut_edges.begin(), res.cut_edges.end());
  return res;
}

namespace {

struct HoEdge {
  int u, v;
  double w;
};

// Undirected edge list of the handover graph: symmetrized rate edges plus
// backhaul edges.
std::vector<HoEdge> handover_edges(const TopologyGraph& g, const HandoverGraph& h) {
  std::vector<HoEdge> edges;
  for (const auto& [key, rate] : h.rate) {
    auto [i, j] = key;
    if (i < j) {
      double w = h.cut_weight(i, j);
      if (w > 0) edges.push_back({i, j, w});
    } else if (h.rate.find({j, i}) == h.rate.end()) {
      // reverse-only edge, not emitted by the i<j branch
      if (rate > 0) edges.push_back({j, i, rate});
    }
  }
  for (int bs : g.bs_nodes())
    edges.push_back({bs, g.backhaul_leaf(bs), h.backhaul_weight});
  std::sort(edges.begin(), edges.end(), [](const HoEdge& a, const HoEdge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  return edges;
}

}  // namespace

CutResult isolating_kcut(const TopologyGraph& g, const HandoverGraph& h) {
  return isolating_kcut(g, h, g.leaf_dc_nodes());
}

CutResult isolating_kcut(const TopologyGraph& g, const HandoverGraph& h,
                         const std::vector<int>& terminals) {
  const int n = (int)g.nodes().size();
  if ((int)terminals.size() < 2)
    throw std::runtime_error("isolating_kcut requires at least 2 terminals");
  for (int t : terminals)
    if (t < 0 || t >= n) throw std::runtime_error("terminal not in graph");
  {
    std::set<int> uniq(terminals.begin(), terminals.end());
    if (uniq.size() != terminals.size())
      throw std::runtime_error("duplicate terminals");
  }

  auto edges = handover_edges(g, h);
  double inf_cap = 1.0;
  for (const auto& e : edges) inf_cap += e.w;
  inf_cap *= 4.0;

  CutResult result;
  std::vector<std::vector<std::pair<int, int>>> cuts;  // per terminal
  std::vector<double> weights;
  for (int t : terminals) {
    FlowNetwork net(n + 1);
    for (const auto& e : edges) net.add_edge(e.u, e.v, e.w);
    for (int other : terminals)
      if (other != t) net.add_edge(other, n, inf_cap);
    auto mc = net.max_flow_min_cut(t, n);
    std::vector<std::pair<int, int>> cut;
    for (auto [u, v] : mc.cut_edges)
      if (u < n && v < n) cut.push_back({u, v});
    cuts.push_back(std::move(cut));
    weights.push_back(mc.flow);
    result.isolating_weights[t] = mc.flow;
  }

  // Drop the single most expensive isolating cut from the union.
  int drop = 0;
  for (int k = 1; k < (int)terminals.size(); ++k)
    if (weights[k] > weights[drop]) drop = k;

  std::set<std::pair<int, int>> removed;
  for (int k = 0; k < (int)terminals.size(); ++k) {
    if (k == drop) continue;
    removed.insert(cuts[k].begin(), cuts[k].end());
  }

  // Components of the residual graph.
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : edges) {
    if (removed.count({e.u, e.v})) continue;
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<int> comp(n, -1);
  int n_comp = 0;
  std::vector<char> in_ho(n, 0);
  for (const auto& e : edges) in_ho[e.u] = in_ho[e.v] = 1;
  for (int t : terminals) in_ho[t] = 1;
  for (int s = 0; s < n; ++s) {
    if (!in_ho[s] || comp[s] != -1) continue;
    std::queue<int> q;
    q.push(s);
    comp[s] = n_comp;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u])
        if (comp[v] == -1) {
          comp[v] = n_comp;
          q.push(v);
        }
    }
    ++n_comp;
  }

  std::vector<Cluster> clusters(n_comp);
  for (int u = 0; u < n; ++u) {
    if (comp[u] == -1) continue;
    if (g.nodes()[u].kind == NodeKind::base_station)
      clusters[comp[u]].bss.push_back(u);
    else if (g.nodes()[u].kind == NodeKind::leaf_dc)
      clusters[comp[u]].leaves.push_back(u);
  }
  for (int t : terminals) {
    Cluster& c = clusters[comp[t]];
    if (c.serving_dc != -1)
      throw std::runtime_error("isolating cut failed to separate terminals");
    c.serving_dc = t;
  }
  result.partition.clusters = std::move(clusters);
  result.partition.rebuild_index(n);

  double w = 0.0;
  for (const auto& [key, rate] : h.rate)
    if (result.partition.cluster_of(key.first) !=
        result.partition.cluster_of(key.second))
      w += rate;
  result.cut_weight = w;
  return result;
}

CutResult repair_partition(const CutResult& c, const TopologyGraph& g,
                           const HandoverGraph& h) {
  CutResult out = c;
  auto& clusters = out.partition.clusters;

  auto edges = handover_edges(g, h);
  std::vector<int> where(g.nodes().size(), -1);
  auto reindex = [&]() {
    std::fill(where.begin(), where.end(), -1);
    for (int k = 0; k < (int)clusters.size(); ++k) {
      for (int u : clusters[k].leaves) where[u] = k;
      for (int u : clusters[k].bss) where[u] = k;
    }
  };
  reindex();

  while (true) {
    int orphan = -1;
    for (int k = 0; k < (int)clusters.size(); ++k)
      if (clusters[k].serving_dc == -1) {
        orphan = k;
        break;
      }
    if (orphan == -1) break;

    // Connecting weight to every valid neighboring cluster.
    std::map<int, double> conn;
    for (const auto& e : edges) {
      int cu = where[e.u];
      int cv = where[e.v];
      if (cu == orphan && cv != orphan && cv != -1 &&
          clusters[cv].serving_dc != -1)
        conn[cv] += e.w;
      else if (cv == orphan && cu != orphan && cu != -1 &&
               clusters[cu].serving_dc != -1)
        conn[cu] += e.w;
    }
    if (conn.empty())
      throw std::runtime_error("orphan component with no neighboring cluster");
    int best = -1;
    double best_w = -1.0;
    for (const auto& [k, w] : conn)
      if (w > best_w) {  // ties resolved by lowest cluster index
        best_w = w;
        best = k;
      }
    auto& dst = clusters[best];
    auto& src = clusters[orphan];
    dst.leaves.insert(dst.leaves.end(), src.leaves.begin(), src.leaves.end());
    dst.bss.insert(dst.bss.end(), src.bss.begin(), src.bss.end());
    std::sort(dst.leaves.begin(), dst.leaves.end());
    std::sort(dst.bss.begin(), dst.bss.end());
    clusters.erase(clusters.begin() + orphan);
    reindex();
  }

  out.partition.rebuild_index((int)g.nodes().size());
  double w = 0.0;
  for (const auto& [key, rate] : h.rate)
    if (out.partition.cluster_of(key.first) != out.partition.cluster_of(key.second))
      w += rate;
  out.cut_weight = w;
  return out;
}

}  // namespace mec
