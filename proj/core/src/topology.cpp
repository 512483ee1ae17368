#include "faultloc/topology.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "faultloc/error.hpp"
#include "faultloc/rng.hpp"

namespace faultloc {

namespace {

// Backbone of the internet2-like preset: 15 routers named after Internet2
// city PoPs, one end host per router, and 36 router-router links. Three hub
// routers (indianapolis, kansascity, saltlake) form the core; every other
// router is dual-homed to hubs, with chord links adding route diversity.
// This wiring is load-bearing: every one of the 87 interfaces lies on at
// least one shortest path, all 102 component path-sets are distinct, and the
// resulting datasets reproduce the published localization and imputation
// behavior. Change it only together with the tests that pin those facts.
const char* const kCities[15] = {
    "albuquerque", "atlanta", "chicago", "dallas", "denver", "elpaso", "houston",
    "indianapolis", "kansascity", "losangeles", "newyork", "saltlake", "seattle",
    "sunnyvale", "washington"};

const std::pair<const char*, const char*> kBackbone[36] = {
    {"albuquerque", "atlanta"},     {"albuquerque", "indianapolis"},
    {"albuquerque", "saltlake"},    {"atlanta", "indianapolis"},
    {"atlanta", "saltlake"},        {"chicago", "kansascity"},
    {"chicago", "saltlake"},        {"dallas", "kansascity"},
    {"dallas", "losangeles"},       {"dallas", "saltlake"},
    {"denver", "kansascity"},       {"denver", "saltlake"},
    {"elpaso", "houston"},          {"elpaso", "indianapolis"},
    {"elpaso", "saltlake"},         {"elpaso", "washington"},
    {"houston", "indianapolis"},    {"houston", "kansascity"},
    {"indianapolis", "kansascity"}, {"indianapolis", "losangeles"},
    {"indianapolis", "newyork"},    {"indianapolis", "saltlake"},
    {"indianapolis", "seattle"},    {"indianapolis", "sunnyvale"},
    {"indianapolis", "washington"}, {"kansascity", "losangeles"},
    {"kansascity", "newyork"},      {"kansascity", "saltlake"},
    {"kansascity", "sunnyvale"},    {"kansascity", "washington"},
    {"losangeles", "saltlake"},     {"losangeles", "seattle"},
    {"newyork", "saltlake"},        {"newyork", "washington"},
    {"saltlake", "seattle"},        {"seattle", "washington"}};

Topology build_internet2_like() {
    Topology t;
    t.name = "internet2-like";
    for (int i = 0; i < 15; ++i) {
        t.hosts.push_back(i < 10 ? "h0" + std::to_string(i) : "h" + std::to_string(i));
        t.routers.push_back(kCities[i]);
    }
    for (const auto& [a, b] : kBackbone) t.links.push_back({a, b});
    for (int i = 0; i < 15; ++i) t.links.push_back({t.hosts[i], kCities[i]});
    return t;
}

Topology build_ring() {
    Topology t;
    t.name = "ring";
    for (int i = 0; i < 4; ++i) {
        t.hosts.push_back("h" + std::to_string(i));
        t.routers.push_back("r" + std::to_string(i));
    }
    t.links = {{"r0", "r1"}, {"r1", "r2"}, {"r2", "r3"}, {"r0", "r3"},
               {"h0", "r0"}, {"h1", "r1"}, {"h2", "r2"}, {"h3", "r3"}};
    return t;
}

bool is_connected(const Topology& t) {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& l : t.links) {
        adj[l.a].push_back(l.b);
        adj[l.b].push_back(l.a);
    }
    std::set<std::string> seen;
    std::vector<std::string> stack;
    if (t.hosts.empty() && t.routers.empty()) return true;
    stack.push_back(t.hosts.empty() ? t.routers[0] : t.hosts[0]);
    seen.insert(stack[0]);
    while (!stack.empty()) {
        std::string u = stack.back();
        stack.pop_back();
        for (const auto& v : adj[u]) {
            if (seen.insert(v).second) stack.push_back(v);
        }
    }
    return seen.size() == t.hosts.size() + t.routers.size();
}

}  // namespace

Topology build_random(const RandomTopoParams& p, std::uint64_t seed) {
    if (p.n_hosts < 2 || p.n_routers < 1) {
        throw Error("BadParams", "random preset needs >= 2 hosts and >= 1 router");
    }
    for (int attempt = 0; attempt <= p.max_retries; ++attempt) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
        Topology t;
        t.name = "random";
        auto padded = [](char prefix, int i) {
            std::string s = std::to_string(i);
            if (s.size() < 2) s.insert(0, "0");
            return prefix + s;
        };
        for (int i = 0; i < p.n_hosts; ++i) t.hosts.push_back(padded('h', i));
        for (int i = 0; i < p.n_routers; ++i) t.routers.push_back(padded('r', i));
        // random spanning tree over the routers, then extra links
        std::set<std::pair<int, int>> rr;
        for (int i = 1; i < p.n_routers; ++i) {
            int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i)));
            rr.insert({j, i});
        }
        const std::size_t max_rr =
            static_cast<std::size_t>(p.n_routers) * (p.n_routers - 1) / 2;
        std::size_t want = std::min(rr.size() + static_cast<std::size_t>(p.extra_links), max_rr);
        int guard = 0;
        while (rr.size() < want && guard++ < 10000) {
            int a = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(p.n_routers)));
            int b = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(p.n_routers)));
            if (a == b) continue;
            rr.insert({std::min(a, b), std::max(a, b)});
        }
        for (const auto& [a, b] : rr) t.links.push_back({t.routers[a], t.routers[b]});
        for (int i = 0; i < p.n_hosts; ++i) {
            int r = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(p.n_routers)));
            t.links.push_back({t.hosts[i], t.routers[r]});
        }
        if (is_connected(t)) return t;
    }
    throw Error("Disconnected", "random generator exhausted its retry budget");
}

Topology build_preset(const std::string& preset_name, std::uint64_t seed) {
    if (preset_name == "internet2-like") return build_internet2_like();
    if (preset_name == "ring") return build_ring();
    if (preset_name == "random") return build_random(RandomTopoParams{}, seed);
    throw Error("UnknownPreset", preset_name);
}

void validate(const Topology& t) {
    std::set<std::string> nodes;
    for (const auto& h : t.hosts) {
        if (!nodes.insert(h).second) throw Error("DuplicateNode", h);
    }
    for (const auto& r : t.routers) {
        if (!nodes.insert(r).second) throw Error("DuplicateNode", r);
    }
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& l : t.links) {
        if (!nodes.count(l.a) || !nodes.count(l.b)) {
            throw Error("DanglingLink", l.a + " -- " + l.b);
        }
        if (l.a == l.b) throw Error("SelfLink", l.a);
        auto key = std::minmax(l.a, l.b);
        if (!seen.insert({key.first, key.second}).second) {
            throw Error("DuplicateLink", l.a + " -- " + l.b);
        }
    }
    if (!is_connected(t)) throw Error("Disconnected", "topology graph is not connected");
}

std::vector<Component> component_list(const Topology& t) {
    std::vector<Component> out;
    std::vector<std::string> hosts = t.hosts;
    std::sort(hosts.begin(), hosts.end());
    for (const auto& h : hosts) out.push_back({Component::Kind::Host, h, "", -1});

    std::vector<std::string> routers = t.routers;
    std::sort(routers.begin(), routers.end());
    for (const auto& r : routers) {
        for (std::size_t li = 0; li < t.links.size(); ++li) {
            const Link& l = t.links[li];
            const std::string* peer = nullptr;
            if (l.a == r) peer = &l.b;
            else if (l.b == r) peer = &l.a;
            else continue;
            out.push_back({Component::Kind::RouterInterface, r + "->" + *peer, r,
                           static_cast<int>(li)});
        }
    }
    return out;
}

std::string topology_to_json(const Topology& t) {
    nlohmann::ordered_json j;
    j["name"] = t.name;
    j["hosts"] = t.hosts;
    j["routers"] = t.routers;
    j["links"] = nlohmann::ordered_json::array();
    for (const auto& l : t.links) j["links"].push_back({{"a", l.a}, {"b", l.b}});
    return j.dump(2) + "\n";
}

Topology topology_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("MalformedJson", e.what());
    }
    try {
        Topology t;
        t.name = j.at("name").get<std::string>();
        t.hosts = j.at("hosts").get<std::vector<std::string>>();
        t.routers = j.at("routers").get<std::vector<std::string>>();
        for (const auto& l : j.at("links")) {
            t.links.push_back({l.at("a").get<std::string>(), l.at("b").get<std::string>()});
        }
        validate(t);
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw Error("MalformedJson", e.what());
    }
}

}  // namespace faultloc
