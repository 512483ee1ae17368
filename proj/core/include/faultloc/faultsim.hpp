#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "faultloc/routing.hpp"

namespace faultloc {

// Per-component integrity-error probability. The sequential-injection
// protocol sets exactly one nonzero entry per sample, but any assignment is
// a valid fault.
struct FaultAssignment {
    std::vector<double> error_prob;  // one entry per component, each in [0,1]
};

// Eq. of the survival product: 1 - prod_{j in route} (1 - error_prob[j]).
// Exact; no simulation.
double path_failure_probability(const std::vector<int>& route, const FaultAssignment& fault);

// Sum over route components of -log(1 - error_prob[j]); the log-linear form
// of the path failure probability. Requires every on-route probability < 1.
double log_linear_sum(const std::vector<int>& route, const FaultAssignment& fault);

// One feature row: for each path, the corrupted fraction over
// transfers_per_pair independent transfers, where a transfer is corrupted if
// any on-route component independently corrupts it. Each path consumes its
// own derived stream, so the row is identical however paths are scheduled.
Eigen::RowVectorXd simulate_transfers(const RoutingTable& routes, const FaultAssignment& fault,
                                      int transfers_per_pair, std::uint64_t seed);

struct GenOptions {
    std::vector<double> grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    int transfers_per_pair = 100;
    int rounds_per_cell = 1;
    std::uint64_t seed = 0;
};

struct Dataset {
    Eigen::MatrixXd X;  // [n_samples x |P|] path corruption rates
    Eigen::MatrixXd Y;  // [n_samples x |C|] injected failure probabilities
    std::vector<std::string> path_ids;        // "src>dst"
    std::vector<std::string> component_ids;   // component labels
    GenOptions provenance;
};

// One sample per (component, grid value, round), in that loop order: inject
// only that component at that probability, simulate a feature row, label it.
// Sample seeds derive as derive_seed(seed, {component, grid index, round}).
Dataset generate_dataset(const Topology& topo, const GenOptions& options);
Dataset generate_dataset(const Topology& topo, const RoutingTable& routes,
                         const GenOptions& options);

std::string provenance_to_json(const GenOptions& options);

}  // namespace faultloc
