#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

#include "faultloc/error.hpp"
#include "faultloc/topology.hpp"

using namespace faultloc;

namespace {

// |C| = |H| + 2*(router-router links) + (host-router links): every backbone
// link contributes an interface at both router endpoints, every access link
// contributes only the router-side interface.
int expected_components(const Topology& t) {
    const std::set<std::string> routers(t.routers.begin(), t.routers.end());
    int rr = 0, hr = 0;
    for (const auto& link : t.links) {
        const bool a_router = routers.count(link.a) > 0;
        const bool b_router = routers.count(link.b) > 0;
        if (a_router && b_router)
            ++rr;
        else
            ++hr;
    }
    return static_cast<int>(t.hosts.size()) + 2 * rr + hr;
}

}  // namespace

TEST_CASE("internet2-like preset has the reference scale") {
    const Topology t = build_preset("internet2-like", 0);
    CHECK(t.hosts.size() == 15);
    CHECK(t.routers.size() == 15);
    CHECK(t.links.size() == 51);  // 36 backbone + 15 access
    const auto comps = component_list(t);
    CHECK(comps.size() == 102);  // 15 hosts + 2*36 + 15 interfaces
    CHECK(static_cast<int>(comps.size()) == expected_components(t));
    // hosts first (sorted), then interfaces
    CHECK(comps[0].kind == Component::Kind::Host);
    CHECK(comps[14].kind == Component::Kind::Host);
    CHECK(comps[15].kind == Component::Kind::RouterInterface);
    validate(t);
}

TEST_CASE("ring preset counts follow the component formula") {
    const Topology t = build_preset("ring", 0);
    CHECK(t.hosts.size() == 4);
    CHECK(t.routers.size() == 4);
    CHECK(t.links.size() == 8);  // 4 ring + 4 access
    const auto comps = component_list(t);
    CHECK(comps.size() == 16);  // 4 hosts + 2*4 + 4 interfaces
    CHECK(static_cast<int>(comps.size()) == expected_components(t));
}

TEST_CASE("component order is stable and labels are unique") {
    const Topology t = build_preset("internet2-like", 0);
    const auto a = component_list(t);
    const auto b = component_list(t);
    REQUIRE(a.size() == b.size());
    std::set<std::string> labels;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].label == b[i].label);
        labels.insert(a[i].label);
    }
    CHECK(labels.size() == a.size());
}

TEST_CASE("unknown preset is rejected") {
    CHECK_THROWS_AS(build_preset("tokyo-metro", 0), Error);
    try {
        build_preset("tokyo-metro", 0);
    } catch (const Error& e) {
        CHECK(e.kind() == "UnknownPreset");
    }
}

TEST_CASE("random preset is connected, valid, and seed-stable") {
    RandomTopoParams params;
    params.n_hosts = 8;
    params.n_routers = 6;
    params.extra_links = 5;
    const Topology a = build_random(params, 3);
    const Topology b = build_random(params, 3);
    CHECK(topology_to_json(a) == topology_to_json(b));
    validate(a);
    CHECK(a.hosts.size() == 8);
    CHECK(a.routers.size() == 6);
    CHECK(static_cast<int>(component_list(a).size()) == expected_components(a));
    const Topology c = build_random(params, 4);
    CHECK(topology_to_json(a) != topology_to_json(c));
}

TEST_CASE("validate rejects malformed topologies") {
    Topology t = build_preset("ring", 0);
    SUBCASE("dangling link") {
        t.links.push_back({"r0", "ghost"});
        CHECK_THROWS_AS(validate(t), Error);
    }
    SUBCASE("self link") {
        t.links.push_back({"r0", "r0"});
        CHECK_THROWS_AS(validate(t), Error);
    }
    SUBCASE("duplicate link") {
        t.links.push_back({"r1", "r0"});  // duplicate of (r0,r1), reversed
        CHECK_THROWS_AS(validate(t), Error);
    }
    SUBCASE("duplicate node id") {
        t.hosts.push_back("r0");
        CHECK_THROWS_AS(validate(t), Error);
    }
    SUBCASE("disconnected") {
        t.routers.push_back("r9");
        CHECK_THROWS_AS(validate(t), Error);
    }
}

TEST_CASE("topology json round-trips") {
    const Topology t = build_preset("internet2-like", 0);
    const std::string text = topology_to_json(t);
    const Topology back = topology_from_json(text);
    CHECK(topology_to_json(back) == text);
    CHECK(back.hosts == t.hosts);
    CHECK(back.routers == t.routers);
    REQUIRE(back.links.size() == t.links.size());
    for (std::size_t i = 0; i < t.links.size(); ++i) {
        CHECK(back.links[i].a == t.links[i].a);
        CHECK(back.links[i].b == t.links[i].b);
    }
    CHECK_THROWS_AS(topology_from_json("{not json"), Error);
    CHECK_THROWS_AS(topology_from_json("{\"name\":\"x\"}"), Error);
}

TEST_CASE("interface labels name router and peer") {
    const Topology t = build_preset("ring", 0);
    const auto comps = component_list(t);
    bool found = false;
    for (const auto& c : comps)
        if (c.label == "r0->r1") {
            found = true;
            CHECK(c.kind == Component::Kind::RouterInterface);
            CHECK(c.router == "r0");
        }
    CHECK(found);
}
