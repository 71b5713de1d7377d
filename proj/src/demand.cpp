#include "mec/demand.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mec {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

void expect_header(std::istream& in, const std::string& expected,
                   const std::string& path) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty CSV file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected)
    throw std::runtime_error("bad CSV header in " + path + ": expected '" +
                             expected + "', got '" + line + "'");
}

double parse_double(const std::string& s, const std::string& path) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("bad numeric field '" + s + "' in " + path);
  }
}

int parse_hour(const std::string& s, const std::string& path) {
  int h = (int)parse_double(s, path);
  if (h < 0 || h > 23)
    throw std::runtime_error("hour out of range in " + path + ": " + s);
  return h;
}

}  // namespace

DemandProfile DemandProfile::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open demand file: " + path);
  expect_header(in, "bs_id,hour,demand_mbps", path);
  DemandProfile p;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 3)
      throw std::runtime_error("bad demand row in " + path + ": " + line);
    Row r{f[0], parse_hour(f[1], path), parse_double(f[2], path)};
    if (r.demand_mbps < 0)
      throw std::runtime_error("negative demand for BS " + r.bs_id);
    p.rows.push_back(std::move(r));
  }
  return p;
}

void DemandProfile::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write demand file: " + path);
  out << "bs_id,hour,demand_mbps\n";
  char buf[64];
  for (const auto& r : rows) {
    snprintf(buf, sizeof buf, "%.6f", r.demand_mbps);
    out << r.bs_id << "," << r.hour << "," << buf << "\n";
  }
}

std::vector<HandoverRecord> load_handover_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open handover file: " + path);
  expect_header(in, "src_bs,dst_bs,hour,ho_per_hour", path);
  std::vector<HandoverRecord> recs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 4)
      throw std::runtime_error("bad handover row in " + path + ": " + line);
    HandoverRecord r{f[0], f[1], parse_hour(f[2], path), parse_double(f[3], path)};
    recs.push_back(std::move(r));
  }
  return recs;
}

void save_handover_csv(const std::vector<HandoverRecord>& recs,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write handover file: " + path);
  out << "src_bs,dst_bs,hour,ho_per_hour\n";
  char buf[64];
  for (const auto& r : recs) {
    snprintf(buf, sizeof buf, "%.6f", r.ho_per_hour);
    out << r.src_bs << "," << r.dst_bs << "," << r.hour << "," << buf << "\n";
  }
}

std::map<int, double> aggregate_demand(const DemandProfile& profile,
                                       const TopologyGraph& g, int hour) {
  if (hour < 0 || hour > 23) throw std::runtime_error("hour out of range");
  std::map<int, double> h_l;
  for (int leaf : g.leaf_dc_nodes()) h_l[leaf] = 0.0;
  for (const auto& r : profile.rows) {
    if (r.hour != hour) continue;
    auto idx = g.find(r.bs_id);
    if (!idx) throw std::runtime_error("demand row for unknown BS: " + r.bs_id);
    if (g.nodes()[*idx].kind != NodeKind::base_station)
      throw std::runtime_error("demand row for non-BS node: " + r.bs_id);
    h_l[g.backhaul_leaf(*idx)] += r.demand_mbps;
  }
  return h_l;
}

HandoverGraph build_handover_graph(const TopologyGraph& g,
                                   const std::vector<HandoverRecord>& records,
                                   int hour) {
  HandoverGraph h;
  h.hour = hour;
  for (const auto& r : records) {
    if (r.hour != hour) continue;
    if (r.ho_per_hour < 0)
      throw std::runtime_error("negative handover rate " + r.src_bs + "->" + r.dst_bs);
    auto si = g.find(r.src_bs);
    auto di = g.find(r.dst_bs);
    if (!si || !di)
      throw std::runtime_error("handover row references unknown BS: " +
                               (!si ? r.src_bs : r.dst_bs));
    if (g.nodes()[*si].kind != NodeKind::base_station ||
        g.nodes()[*di].kind != NodeKind::base_station)
      throw std::runtime_error("handover row endpoint is not a BS");
    if (*si == *di) continue;
    h.rate[{*si, *di}] += r.ho_per_hour;
    h.total_rate += r.ho_per_hour;
  }
  for (const auto& [key, rate] : h.rate) {
    auto& ni = h.neighbors[key.first];
    auto& nj = h.neighbors[key.second];
    if (std::find(ni.begin(), ni.end(), key.second) == ni.end())
      ni.push_back(key.second);
    if (std::find(nj.begin(), nj.end(), key.first) == nj.end())
      nj.push_back(key.first);
  }
  for (auto& [_, n] : h.neighbors) std::sort(n.begin(), n.end());
  h.backhaul_weight = 10.0 * (h.total_rate + 1.0);
  return h;
}

int Partition::cluster_of(int node) const {
  if (node < 0 || node >= (int)index_.size()) return -1;
  return index_[node];
}

void Partition::rebuild_index(int n_nodes) {
  index_.assign(n_nodes, -1);
  for (int c = 0; c < (int)clusters.size(); ++c) {
    for (int l : clusters[c].leaves) index_[l] = c;
    for (int b : clusters[c].bss) index_[b] = c;
  }
}

std::map<int, int> Partition::assignment() const {
  std::map<int, int> a;
  for (const auto& c : clusters)
    for (int l : c.leaves) a[l] = c.serving_dc;
  return a;
}

Partition fully_distributed_partition(const TopologyGraph& g) {
  Partition p;
  for (int leaf : g.leaf_dc_nodes()) {
    Cluster c;
    c.leaves = {leaf};
    c.bss = g.rooted_bss(leaf);
    c.serving_dc = leaf;
    p.clusters.push_back(std::move(c));
  }
  p.rebuild_index((int)g.nodes().size());
  return p;
}

double SarMatrix::between(int v, int u) const {
  double s = 0.0;
  auto it = by_cluster.find({v, u});
  if (it != by_cluster.end()) s += it->second;
  it = by_cluster.find({u, v});
  if (it != by_cluster.end()) s += it->second;
  return s;
}

SarMatrix inter_cluster_sar(const Partition& p, const HandoverGraph& h,
                            const TopologyGraph& g) {
  SarMatrix m;
  for (const auto& [key, rate] : h.rate) {
    auto [i, j] = key;
    int ci = p.cluster_of(i);
    int cj = p.cluster_of(j);
    if (ci == -1 || cj == -1)
      throw std::runtime_error("handover BS not covered by partition: " +
                               g.nodes()[ci == -1 ? i : j].id);
    if (ci == cj || rate == 0.0) continue;
    m.by_bs_pair[key] = rate;
    m.by_cluster[{p.clusters[ci].serving_dc, p.clusters[cj].serving_dc}] += rate;
    m.total += rate;
  }
  return m;
}

}  // namespace mec
