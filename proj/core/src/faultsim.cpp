#include "faultloc/faultsim.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "faultloc/error.hpp"
#include "faultloc/rng.hpp"

namespace faultloc {

namespace {

void check_fault(const FaultAssignment& fault, std::size_t n_components) {
    if (fault.error_prob.size() != n_components) {
        throw Error("BadFault", "assignment covers " + std::to_string(fault.error_prob.size()) +
                                    " of " + std::to_string(n_components) + " components");
    }
    for (double e : fault.error_prob) {
        if (!(e >= 0.0 && e <= 1.0)) throw Error("BadFault", "error probability outside [0,1]");
    }
}

}  // namespace

double path_failure_probability(const std::vector<int>& route, const FaultAssignment& fault) {
    if (route.empty()) throw Error("BadRoute", "empty route");
    double survive = 1.0;
    for (int c : route) survive *= 1.0 - fault.error_prob.at(static_cast<std::size_t>(c));
    return 1.0 - survive;
}

double log_linear_sum(const std::vector<int>& route, const FaultAssignment& fault) {
    if (route.empty()) throw Error("BadRoute", "empty route");
    double total = 0.0;
    for (int c : route) {
        double e = fault.error_prob.at(static_cast<std::size_t>(c));
        if (e >= 1.0) throw Error("BadFault", "log-linear form undefined at error probability 1");
        total += -std::log1p(-e);
    }
    return total;
}

Eigen::RowVectorXd simulate_transfers(const RoutingTable& routes, const FaultAssignment& fault,
                                      int transfers_per_pair, std::uint64_t seed) {
    if (transfers_per_pair < 1) throw Error("BadParams", "transfers_per_pair must be >= 1");
    check_fault(fault, routes.components.size());

    Eigen::RowVectorXd row(static_cast<Eigen::Index>(routes.paths.size()));
    std::vector<double> active;
    for (std::size_t p = 0; p < routes.paths.size(); ++p) {
        active.clear();
        for (int c : routes.routes[p]) {
            double e = fault.error_prob[static_cast<std::size_t>(c)];
            if (e > 0.0) active.push_back(e);
        }
        if (active.empty()) {
            row(static_cast<Eigen::Index>(p)) = 0.0;
            continue;
        }
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(p)}));
        int corrupted = 0;
        for (int t = 0; t < transfers_per_pair; ++t) {
            bool corrupt = false;
            for (double e : active) corrupt = rng.bernoulli(e) || corrupt;
            corrupted += corrupt ? 1 : 0;
        }
        row(static_cast<Eigen::Index>(p)) =
            static_cast<double>(corrupted) / static_cast<double>(transfers_per_pair);
    }
    return row;
}

Dataset generate_dataset(const Topology& topo, const GenOptions& options) {
    return generate_dataset(topo, compute_routes(topo), options);
}

Dataset generate_dataset(const Topology& topo, const RoutingTable& routes,
                         const GenOptions& options) {
    (void)topo;
    if (options.grid.empty()) throw Error("BadParams", "error grid is empty");
    for (double g : options.grid) {
        if (!(g > 0.0 && g <= 1.0)) throw Error("BadParams", "grid values must lie in (0,1]");
    }
    if (options.transfers_per_pair < 1) throw Error("BadParams", "transfers_per_pair must be >= 1");
    if (options.rounds_per_cell < 1) throw Error("BadParams", "rounds_per_cell must be >= 1");

    const std::size_t n_comp = routes.components.size();
    const std::size_t n_paths = routes.paths.size();
    const std::size_t n =
        n_comp * options.grid.size() * static_cast<std::size_t>(options.rounds_per_cell);

    Dataset ds;
    ds.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n_paths));
    ds.Y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n_comp));
    ds.path_ids = routes.path_ids;
    for (const auto& c : routes.components) ds.component_ids.push_back(c.label);
    ds.provenance = options;

    FaultAssignment fault;
    fault.error_prob.assign(n_comp, 0.0);
    Eigen::Index row = 0;
    for (std::size_t c = 0; c < n_comp; ++c) {
        for (std::size_t gi = 0; gi < options.grid.size(); ++gi) {
            fault.error_prob[c] = options.grid[gi];
            for (int round = 0; round < options.rounds_per_cell; ++round) {
                std::uint64_t s = derive_seed(
                    options.seed, {static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(gi),
                                   static_cast<std::uint64_t>(round)});
                ds.X.row(row) = simulate_transfers(routes, fault, options.transfers_per_pair, s);
                ds.Y(row, static_cast<Eigen::Index>(c)) = options.grid[gi];
                ++row;
            }
        }
        fault.error_prob[c] = 0.0;
    }
    return ds;
}

std::string provenance_to_json(const GenOptions& options) {
    nlohmann::ordered_json j;
    j["grid"] = options.grid;
    j["transfers_per_pair"] = options.transfers_per_pair;
    j["rounds_per_cell"] = options.rounds_per_cell;
    j["seed"] = options.seed;
    return j.dump(2) + "\n";
}

}  // namespace faultloc
