#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "mec/optimizer.hpp"

using namespace mec;
using namespace mec::testing;

namespace {

// Three leaves in a line, one BS each, chatty neighbors L0<->L1 and L1<->L2.
struct Line3 {
  TopologyGraph g;
  ServiceAreaMap sam;
  HandoverGraph ho;

  Line3(double ho01, double ho12)
      : g(build_topology(
            {leaf("L0", 0, 0), leaf("L1", 2, 0), leaf("L2", 4, 0),
             bs("b0", 0.1, 0), bs("b1", 2.1, 0), bs("b2", 4.1, 0)},
            {link("L0", "L1", 2), link("L1", "L2", 2), link("b0", "L0", 0.1),
             link("b1", "L1", 0.1), link("b2", "L2", 0.1)})),
        sam(service_areas(g, 10.0)),
        ho(build_handover_graph(
            g,
            {{"b0", "b1", 0, ho01}, {"b1", "b0", 0, ho01},
             {"b1", "b2", 0, ho12}, {"b2", "b1", 0, ho12}},
            0)) {}

  ProvisionContext ctx(double b_sar) const {
    CostModel cost;
    cost.b_sar = b_sar;
    std::map<int, double> h = {{g.index_of("L0"), 4.0},
                               {g.index_of("L1"), 4.0},
                               {g.index_of("L2"), 4.0}};
    return ProvisionContext(g, sam, ho, std::move(h), {}, cost, {});
  }
};

// Independent exhaustive search: every leaf -> candidate combination,
// provisioned directly at the context's cost model.
double brute_best_total(const ProvisionContext& ctx) {
  const auto& leaves = ctx.g.leaf_dc_nodes();
  std::vector<int> pick(leaves.size(), 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::map<int, Cluster> by_dc;
    for (size_t k = 0; k < leaves.size(); ++k) {
      int dc = ctx.candidates(leaves[k])[pick[k]];
      by_dc[dc].serving_dc = dc;
      by_dc[dc].leaves.push_back(leaves[k]);
      const auto& bss = ctx.g.rooted_bss(leaves[k]);
      by_dc[dc].bss.insert(by_dc[dc].bss.end(), bss.begin(), bss.end());
    }
    Partition p;
    for (auto& [_, c] : by_dc) p.clusters.push_back(c);
    p.rebuild_index((int)ctx.g.nodes().size());
    try {
      best = std::min(best, provision(ctx, p).second.total);
    } catch (const ProvisionError&) {
    }
    int k = (int)pick.size() - 1;
    while (k >= 0 && pick[k] + 1 == (int)ctx.candidates(leaves[k]).size())
      pick[k--] = 0;
    if (k < 0) break;
    ++pick[k];
  }
  return best;
}

}  // namespace

TEST_CASE("pseudocost ratio and sentinels") {
  CHECK(pseudocost(0.0, 5.0, 1.0) == 0.0);
  CHECK(pseudocost(10.0, 4.0, 1.0) == doctest::Approx(2.0));
  CHECK(std::isinf(pseudocost(10.0, 0.0, 0.0)));
}

TEST_CASE("greedy keeps clusters apart when relocations are free") {
  Line3 t(50.0, 50.0);
  auto ctx = t.ctx(0.0);
  auto trace = greedy_merge(ctx, fully_distributed_partition(t.g));
  CHECK(trace.steps.empty());  // merging only adds link cost at b_sar = 0
  CHECK(trace.final_partition.clusters.size() == 3);
  CHECK(trace.final_costs.total_sar == doctest::Approx(200.0));
}

TEST_CASE("greedy collapses to one cluster when relocations dominate") {
  Line3 t(50.0, 50.0);
  auto ctx = t.ctx(1e6);
  auto trace = greedy_merge(ctx, fully_distributed_partition(t.g));
  CHECK(trace.final_partition.clusters.size() == 1);
  CHECK(trace.final_costs.total_sar == 0.0);
  REQUIRE(trace.steps.size() == 2);
  // Accepted merges strictly improve the running total.
  CHECK(trace.steps[0].total_cost < trace.initial_cost);
  CHECK(trace.steps[1].total_cost < trace.steps[0].total_cost);
  CHECK(trace.final_costs.total == doctest::Approx(trace.steps.back().total_cost));
}

TEST_CASE("asymmetric chatter merges the hot pair first") {
  Line3 t(80.0, 1.0);  // L0-L1 much hotter than L1-L2
  auto ctx = t.ctx(10.0);
  auto trace = greedy_merge(ctx, fully_distributed_partition(t.g));
  REQUIRE(!trace.steps.empty());
  auto first_pair = std::minmax(t.g.nodes()[trace.steps[0].kept_dc].id,
                                t.g.nodes()[trace.steps[0].absorbed_dc].id);
  CHECK(first_pair.first == "L0");
  CHECK(first_pair.second == "L1");
}

TEST_CASE("force_merge_to_one reaches a single cluster even at b_sar = 0") {
  Line3 t(50.0, 50.0);
  auto ctx = t.ctx(0.0);
  GreedyOptions gopts;
  gopts.force_merge_to_one = true;
  auto trace = greedy_merge(ctx, fully_distributed_partition(t.g), gopts);
  CHECK(trace.final_partition.clusters.size() == 1);
  CHECK(trace.steps.size() == 2);
}

TEST_CASE("merge trace CSV carries one line per step") {
  Line3 t(50.0, 50.0);
  auto ctx = t.ctx(1e6);
  auto trace = greedy_merge(ctx, fully_distributed_partition(t.g));
  auto csv = trace.to_csv(t.g);
  CHECK(csv.rfind("step,pair,gamma,direction,total_cost,n_serving_dcs,total_sar\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + (long)trace.steps.size());
}

TEST_CASE("exact oracle matches independent enumeration across b_sar values") {
  Line3 t(30.0, 7.0);
  auto ctx0 = t.ctx(0.0);
  ExactOracle oracle(ctx0);
  CHECK(oracle.n_assignments() == 27);  // 3 leaves x 3 candidates
  for (double b : {0.0, 0.05, 1.0, 50.0, 1e5}) {
    auto ctx_b = t.ctx(b);
    double brute = brute_best_total(ctx_b);
    auto best = oracle.best(b);
    CHECK(best.costs.total ==
          doctest::Approx(brute).epsilon(1e-9).scale(std::max(1.0, brute)));
  }
}

TEST_CASE("oracle SAR volume never increases with b_sar") {
  Line3 t(30.0, 7.0);
  auto ctx = t.ctx(0.0);
  ExactOracle oracle(ctx);
  double prev = std::numeric_limits<double>::infinity();
  for (double b : {0.0, 0.1, 1.0, 10.0, 100.0, 1000.0, 1e5}) {
    double s = oracle.optimal_sar(b);
    CHECK(s <= prev + 1e-9);
    prev = s;
  }
  // Endpoints: free relocations keep everything local, expensive ones don't.
  CHECK(oracle.optimal_sar(0.0) == doctest::Approx(74.0));  // 2*(30 + 7)
  CHECK(oracle.optimal_sar(1e9) == 0.0);
}

TEST_CASE("greedy never beats the exact oracle") {
  for (double b : {0.0, 1.0, 20.0, 500.0}) {
    Line3 t(25.0, 12.0);
    auto ctx = t.ctx(b);
    auto ctx0 = t.ctx(0.0);
    ExactOracle oracle(ctx0);
    auto trace = greedy_merge(ctx, fully_distributed_partition(t.g));
    double opt = oracle.best(b).costs.total;
    CHECK(trace.final_costs.total >= opt - 1e-9 * std::max(1.0, opt));
  }
}
