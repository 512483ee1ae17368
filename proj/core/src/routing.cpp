#include "faultloc/routing.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "faultloc/error.hpp"

namespace faultloc {

int RoutingTable::path_index(const std::string& src, const std::string& dst) const {
    auto it = std::lower_bound(paths.begin(), paths.end(), std::make_pair(src, dst));
    if (it == paths.end() || *it != std::make_pair(src, dst)) {
        throw Error("UnknownPath", src + ">" + dst);
    }
    return static_cast<int>(it - paths.begin());
}

RoutingTable compute_routes(const Topology& topo) {
    validate(topo);

    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& l : topo.links) {
        adj[l.a].push_back(l.b);
        adj[l.b].push_back(l.a);
    }
    for (auto& [node, nbrs] : adj) std::sort(nbrs.begin(), nbrs.end());

    const std::set<std::string> host_set(topo.hosts.begin(), topo.hosts.end());

    RoutingTable rt;
    rt.components = component_list(topo);
    std::map<std::string, int> host_comp;
    std::map<std::pair<std::string, std::string>, int> iface_comp;  // (router, peer)
    for (std::size_t i = 0; i < rt.components.size(); ++i) {
        const Component& c = rt.components[i];
        if (c.kind == Component::Kind::Host) {
            host_comp[c.label] = static_cast<int>(i);
        } else {
            const Link& l = topo.links[static_cast<std::size_t>(c.link)];
            const std::string& peer = (l.a == c.router) ? l.b : l.a;
            iface_comp[{c.router, peer}] = static_cast<int>(i);
        }
    }

    std::vector<std::string> hosts = topo.hosts;
    std::sort(hosts.begin(), hosts.end());

    // node sequence of the canonical route a -> b, a < b
    auto node_route = [&](const std::string& a, const std::string& b) {
        // BFS from b: hop distance of every node, hosts blocked as transit
        std::map<std::string, int> dist;
        dist[b] = 0;
        std::deque<std::string> q{b};
        while (!q.empty()) {
            std::string u = q.front();
            q.pop_front();
            if (host_set.count(u) && u != b) continue;  // hosts do not forward
            for (const auto& v : adj[u]) {
                if (!dist.count(v)) {
                    dist[v] = dist[u] + 1;
                    q.push_back(v);
                }
            }
        }
        if (!dist.count(a)) throw Error("Disconnected", a + " -/- " + b);
        // greedy descent picks the lexicographically smallest shortest sequence
        std::vector<std::string> seq{a};
        std::string cur = a;
        while (cur != b) {
            const std::string* best = nullptr;
            for (const auto& v : adj[cur]) {
                if (host_set.count(v) && v != b) continue;
                auto it = dist.find(v);
                if (it == dist.end() || it->second != dist[cur] - 1) continue;
                if (!best || v < *best) best = &v;
                break;  // neighbors are sorted; the first admissible one is smallest
            }
            if (!best) throw Error("Disconnected", a + " -/- " + b);
            seq.push_back(*best);
            cur = *best;
        }
        return seq;
    };

    auto to_components = [&](const std::vector<std::string>& seq) {
        std::vector<int> comps;
        comps.push_back(host_comp.at(seq.front()));
        for (std::size_t i = 1; i + 1 < seq.size(); ++i) {
            comps.push_back(iface_comp.at({seq[i], seq[i + 1]}));
        }
        comps.push_back(host_comp.at(seq.back()));
        return comps;
    };

    for (const auto& a : hosts) {
        for (const auto& b : hosts) {
            if (a == b) continue;
            rt.paths.emplace_back(a, b);
            rt.path_ids.push_back(a + ">" + b);
            rt.routes.emplace_back();
        }
    }
    for (std::size_t i = 0; i < hosts.size(); ++i) {
        for (std::size_t j = i + 1; j < hosts.size(); ++j) {
            std::vector<std::string> fwd = node_route(hosts[i], hosts[j]);
            std::vector<std::string> rev(fwd.rbegin(), fwd.rend());
            rt.routes[static_cast<std::size_t>(rt.path_index(hosts[i], hosts[j]))] =
                to_components(fwd);
            rt.routes[static_cast<std::size_t>(rt.path_index(hosts[j], hosts[i]))] =
                to_components(rev);
        }
    }
    return rt;
}

}  // namespace faultloc
