#pragma once

#include <string>
#include <vector>

#include "mec/demand.hpp"
#include "mec/topology.hpp"

namespace mec::testing {

inline Node bs(const std::string& id, double x, double y) {
  return Node{id, NodeKind::base_station, x, y};
}
inline Node leaf(const std::string& id, double x, double y) {
  return Node{id, NodeKind::leaf_dc, x, y};
}
inline Node core(const std::string& id, double x, double y) {
  return Node{id, NodeKind::core_dc, x, y};
}
inline Link link(const std::string& a, const std::string& b, double dist_km = 0,
                 double latency_us = 0, double cap = kUnbounded) {
  return Link{a, b, dist_km, latency_us, cap};
}

// Triangle backbone: leaf L with one BS, DCs A (direct, 10 km) and A via B
// (10 km + 10 km).
inline TopologyGraph triangle() {
  std::vector<Node> nodes = {bs("bs1", 0, 0.1), leaf("L", 0, 0), leaf("A", 10, 0),
                             leaf("B", 5, 5)};
  std::vector<Link> links = {link("bs1", "L", 0.1), link("L", "A", 10),
                             link("L", "B", 10), link("B", "A", 10)};
  return build_topology(std::move(nodes), std::move(links));
}

}  // namespace mec::testing
