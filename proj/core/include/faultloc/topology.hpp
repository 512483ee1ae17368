#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace faultloc {

struct Link {
    std::string a, b;
};

struct Topology {
    std::string name;
    std::vector<std::string> hosts;
    std::vector<std::string> routers;
    std::vector<Link> links;
};

// A localizable fault site: an end host, or one router-side endpoint of a
// link. Host NICs are folded into the host component, so a link owns one
// interface per router endpoint and none for host endpoints.
struct Component {
    enum class Kind { Host, RouterInterface };
    Kind kind;
    std::string label;   // host id, or "<router>-><peer>" for interfaces
    std::string router;  // owning router (interfaces only)
    int link = -1;       // index into Topology::links (interfaces only)
};

struct RandomTopoParams {
    int n_hosts = 6;
    int n_routers = 5;
    int extra_links = 4;  // on top of a random spanning tree over the routers
    int max_retries = 32;
};

// Presets: "internet2-like" (15 hosts, 87 interfaces, 102 components),
// "ring" (4 hosts, 4 routers in a cycle), "random" (seeded generator).
Topology build_preset(const std::string& preset_name, std::uint64_t seed);
Topology build_random(const RandomTopoParams& params, std::uint64_t seed);

// Throws Error on broken invariants (duplicate ids, dangling endpoints,
// duplicate or self links, disconnected graph).
void validate(const Topology& topo);

// Deterministic global component ordering: hosts sorted by id, then router
// interfaces sorted by (router id, link index).
std::vector<Component> component_list(const Topology& topo);

// JSON document {name, hosts, routers, links:[{a,b}]}; interfaces and
// component ordering are derived, never serialized.
std::string topology_to_json(const Topology& topo);
Topology topology_from_json(const std::string& text);

}  // namespace faultloc
