#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "helpers.hpp"
#include "mec/topology.hpp"

using namespace mec;
using namespace mec::testing;

TEST_CASE("build_topology accepts a minimal well-formed graph") {
  std::vector<Node> nodes = {bs("b", 0, 0), leaf("l", 1, 0), core("c", 2, 0)};
  std::vector<Link> links = {link("b", "l", 1), link("l", "c", 1)};
  auto g = build_topology(std::move(nodes), std::move(links));
  CHECK(g.links().size() == 2);
  CHECK(g.bs_nodes().size() == 1);
  CHECK(g.dc_nodes().size() == 2);
  CHECK(g.backhaul_leaf(g.index_of("b")) == g.index_of("l"));
}

TEST_CASE("missing link latency is filled from distance") {
  std::vector<Node> nodes = {bs("b", 0, 0), leaf("l", 10, 0)};
  std::vector<Link> links = {link("b", "l", 10)};
  auto g = build_topology(std::move(nodes), std::move(links), 5.0);
  CHECK(g.links()[0].latency_us_oneway == doctest::Approx(50.0));
}

TEST_CASE("build_topology rejects bad inputs") {
  CHECK_THROWS_WITH_AS(
      build_topology({bs("b", 0, 0), leaf("l", 1, 0), bs("b", 2, 0)},
                     {link("b", "l", 1)}),
      "duplicate node id: b", std::runtime_error);
  CHECK_THROWS_AS(build_topology({bs("b", 0, 0), leaf("l", 1, 0)}, {}),
                  std::runtime_error);  // BS with no leaf-DC attachment
  CHECK_THROWS_AS(build_topology({bs("b", 0, 0), leaf("l", 1, 0), leaf("m", 9, 0)},
                                 {link("b", "l", 1)}),
                  std::runtime_error);  // disconnected
}

TEST_CASE("topology JSON round-trip and unknown field rejection") {
  auto g = triangle();
  save_topology(g, "test_topo.json");
  auto g2 = load_topology("test_topo.json");
  CHECK(g2.nodes().size() == g.nodes().size());
  CHECK(g2.links().size() == g.links().size());
  CHECK_THROWS_AS(parse_topology(R"({"nodes":[],"links":[],"extra":1})"),
                  std::runtime_error);
  CHECK_THROWS_AS(
      parse_topology(
          R"({"nodes":[{"id":"a","kind":"leaf_dc","x_km":0,"y_km":0,"z":1}],"links":[]})"),
      std::runtime_error);
}

TEST_CASE("feasible_paths identity case") {
  auto g = triangle();
  auto ps = feasible_paths(g, "L", "L", 1.0);
  REQUIRE(ps.size() == 1);
  CHECK(ps[0].latency_rtt_ms == 0.0);
  CHECK(ps[0].link_seq.empty());
}

TEST_CASE("feasible_paths on the triangle") {
  auto g = triangle();
  // Direct L-A at 10 km and L-B-A at 20 km, 5 us/km.
  auto ps = feasible_paths(g, "L", "A", 1.0);
  REQUIRE(ps.size() == 2);
  CHECK(ps[0].latency_rtt_ms == doctest::Approx(0.1));
  CHECK(ps[1].latency_rtt_ms == doctest::Approx(0.2));
  CHECK(ps[0].cost_per_mbps < ps[1].cost_per_mbps);

  auto tight = feasible_paths(g, "L", "A", 0.15);
  REQUIRE(tight.size() == 1);
  CHECK(tight[0].latency_rtt_ms == doctest::Approx(0.1));

  CHECK_THROWS_AS(feasible_paths(g, "nope", "A", 1.0), std::runtime_error);
}

TEST_CASE("feasible_paths results are simple, feasible and cost-sorted") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Node> nodes = {bs("b", 0, 0)};
    int n = 5 + (int)(rng() % 4);
    for (int i = 0; i < n; ++i)
      nodes.push_back(leaf("d" + std::to_string(i),
                           double(rng() % 100) / 10.0, double(rng() % 100) / 10.0));
    std::vector<Link> links = {link("b", "d0", 0.1)};
    for (int i = 1; i < n; ++i)
      links.push_back(link("d" + std::to_string(i),
                           "d" + std::to_string(rng() % i)));
    for (int extra = 0; extra < n; ++extra) {
      int u = rng() % n, v = rng() % n;
      if (u != v)
        links.push_back(link("d" + std::to_string(u), "d" + std::to_string(v)));
    }
    auto g = build_topology(std::move(nodes), std::move(links));
    double budget = 0.05 + double(rng() % 100) / 500.0;
    auto ps = feasible_paths(g, g.index_of("d0"),
                             g.index_of("d" + std::to_string(n - 1)), budget, 6);
    for (size_t k = 0; k < ps.size(); ++k) {
      CHECK(ps[k].latency_rtt_ms <= budget + 1e-9);
      std::set<int> uniq(ps[k].node_seq.begin(), ps[k].node_seq.end());
      CHECK(uniq.size() == ps[k].node_seq.size());
      if (k > 0) CHECK(ps[k - 1].cost_per_mbps <= ps[k].cost_per_mbps + 1e-12);
    }
  }
}

TEST_CASE("service_areas duality and full coverage") {
  auto g = triangle();
  auto sam = service_areas(g, 10.0);
  for (const auto& [node, dcs] : sam.dc_of)
    for (int v : dcs) CHECK(sam.covers(v, node));
  for (const auto& [v, members] : sam.sa_of)
    for (int u : members) {
      auto& dcs = sam.dc_of.at(u);
      CHECK(std::find(dcs.begin(), dcs.end(), v) != dcs.end());
    }
  // All three DCs cover the single BS under a loose budget.
  CHECK(sam.dc_of.at(g.index_of("bs1")).size() == 3);
  CHECK(sam.bs_coverage_fraction(g) == 1.0);
}

TEST_CASE("infeasible budget empties all candidate sets") {
  auto g = triangle();
  auto sam = service_areas(g, 1e-6);
  for (int bsn : g.bs_nodes()) CHECK(sam.dc_of.at(bsn).empty());
  CHECK(sam.bs_coverage_fraction(g) == 0.0);
}

TEST_CASE("shrinking the budget never grows DC(i)") {
  auto g = triangle();
  auto wide = service_areas(g, 0.3);
  auto narrow = service_areas(g, 0.11);
  for (const auto& [node, dcs] : narrow.dc_of) {
    const auto& w = wide.dc_of.at(node);
    for (int v : dcs) CHECK(std::find(w.begin(), w.end(), v) != w.end());
  }
}

namespace {

// Four quadrant leaves, each with its own BSs, far enough apart that a tight
// budget keeps coverage local.
mec::TopologyGraph quadrants() {
  std::vector<Node> nodes;
  std::vector<Link> links;
  double cx[4] = {0, 100, 0, 100};
  double cy[4] = {0, 0, 100, 100};
  for (int q = 0; q < 4; ++q) {
    std::string l = "L" + std::to_string(q);
    nodes.push_back(leaf(l, cx[q], cy[q]));
    for (int k = 0; k < 3; ++k) {
      std::string b = "b" + std::to_string(q) + std::to_string(k);
      nodes.push_back(bs(b, cx[q] + 0.1 * (k + 1), cy[q]));
      links.push_back(link(b, l));
    }
  }
  links.push_back(link("L0", "L1"));
  links.push_back(link("L1", "L3"));
  links.push_back(link("L3", "L2"));
  links.push_back(link("L2", "L0"));
  return build_topology(std::move(nodes), std::move(links));
}

}  // namespace

TEST_CASE("min_dc_cover trivial and quadrant instances") {
  auto g = triangle();
  auto sam = service_areas(g, 10.0);
  auto cover = min_dc_cover(g, sam, CoverMode::exact);
  CHECK(cover.size() == 1);

  auto q = quadrants();
  auto qs = service_areas(q, 0.1);  // ~10 km one-way reach, quadrants are 100 km apart
  auto qc = min_dc_cover(q, qs, CoverMode::exact);
  CHECK(qc.size() == 4);
}

TEST_CASE("min_dc_cover errors on uncoverable BS") {
  auto g = triangle();
  auto sam = service_areas(g, 1e-6);
  CHECK_THROWS_AS(min_dc_cover(g, sam, CoverMode::exact), std::runtime_error);
}

TEST_CASE("greedy cover is never smaller than exact") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Node> nodes;
    std::vector<Link> links;
    int n_dc = 8;
    for (int i = 0; i < n_dc; ++i)
      nodes.push_back(leaf("d" + std::to_string(i), double(rng() % 200) / 10.0,
                           double(rng() % 200) / 10.0));
    for (int i = 1; i < n_dc; ++i)
      links.push_back(link("d" + std::to_string(i), "d" + std::to_string(rng() % i)));
    for (int b = 0; b < 12; ++b) {
      std::string id = "b" + std::to_string(b);
      nodes.push_back(bs(id, double(rng() % 200) / 10.0, double(rng() % 200) / 10.0));
      links.push_back(link(id, "d" + std::to_string(rng() % n_dc)));
    }
    auto g = build_topology(std::move(nodes), std::move(links));
    auto sam = service_areas(g, 0.2);
    bool coverable = true;
    for (int bsn : g.bs_nodes())
      if (sam.dc_of.at(bsn).empty()) coverable = false;
    if (!coverable) continue;
    auto exact = min_dc_cover(g, sam, CoverMode::exact);
    auto greedy = min_dc_cover(g, sam, CoverMode::greedy);
    CHECK(exact.size() <= greedy.size());
  }
}
