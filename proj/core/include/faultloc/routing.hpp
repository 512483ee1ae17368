#pragma once

#include <string>
#include <utility>
#include <vector>

#include "faultloc/topology.hpp"

namespace faultloc {

// All ordered host pairs (lexicographic by (src, dst)) and, for each, the
// route as a component-index sequence into component_list(topology):
//   [src host, egress interface of each router along the travel direction
//    (toward the next router, or toward the destination host), dst host]
// A packet is corrupted by the transmitting side of each hop, so a route
// contains the egress interface per visited router, never the receiving one.
struct RoutingTable {
    std::vector<std::pair<std::string, std::string>> paths;
    std::vector<std::vector<int>> routes;       // aligned with paths
    std::vector<std::string> path_ids;          // "src>dst", aligned with paths
    std::vector<Component> components;          // the global component order

    int path_index(const std::string& src, const std::string& dst) const;
};

// Shortest path by hop count. Ties: the route is computed from the
// lexicographically smaller endpoint preferring the lexicographically
// smallest node-id sequence, and reversed for the opposite direction, so
// route(a,b) and route(b,a) always traverse the same links. Hosts never
// appear as transit nodes.
RoutingTable compute_routes(const Topology& topo);

}  // namespace faultloc
