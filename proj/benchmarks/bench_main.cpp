// Microbenchmarks for the hot paths: dataset simulation, the lasso
// coordinate-descent solver, one imputation round, and forest training.

#include <benchmark/benchmark.h>

#include "faultloc/faultsim.hpp"
#include "faultloc/impute.hpp"
#include "faultloc/missing.hpp"
#include "faultloc/regress.hpp"
#include "faultloc/rng.hpp"
#include "faultloc/routing.hpp"
#include "faultloc/topology.hpp"

namespace {

using faultloc::EstimatorSpec;

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    faultloc::Rng rng(seed);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.next_double();
    return m;
}

void bench_generate_dataset(benchmark::State& state) {
    const auto topo = faultloc::build_preset("internet2-like", 0);
    const auto routes = faultloc::compute_routes(topo);
    faultloc::GenOptions options;
    options.grid = {0.3};
    options.transfers_per_pair = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto data = faultloc::generate_dataset(topo, routes, options);
        benchmark::DoNotOptimize(data.X.data());
    }
}
BENCHMARK(bench_generate_dataset)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void bench_lasso_fit(benchmark::State& state) {
    const Eigen::Index n = 640, p = state.range(0);
    const Eigen::MatrixXd x = random_matrix(n, p, 1);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
    w.head(8).setConstant(0.5);
    const Eigen::VectorXd y = x * w;
    for (auto _ : state) {
        auto model = faultloc::fit_linear(x, y, faultloc::Penalty::L1, 1e-4);
        benchmark::DoNotOptimize(model.weights.data());
    }
}
BENCHMARK(bench_lasso_fit)->Arg(64)->Arg(210)->Unit(benchmark::kMillisecond);

void bench_impute_round(benchmark::State& state) {
    const Eigen::MatrixXd x = random_matrix(320, 64, 2);
    const auto mask = faultloc::sample_mask(320, 64, 0.3, faultloc::MaskMode::McarCell, 3);
    const Eigen::MatrixXd masked = faultloc::apply_mask(x, mask);
    faultloc::ImputerConfig config;
    config.estimator = EstimatorSpec{EstimatorSpec::Kind::Lasso, 1e-4, 5, {}};
    config.max_rounds = 1;  // time a single sweep over the columns
    for (auto _ : state) {
        auto result = faultloc::impute(masked, config);
        benchmark::DoNotOptimize(result.completed.data());
    }
}
BENCHMARK(bench_impute_round)->Unit(benchmark::kMillisecond);

void bench_forest_fit(benchmark::State& state) {
    const Eigen::MatrixXd x = random_matrix(640, 210, 4);
    const Eigen::VectorXd y = x.col(0) + 0.5 * x.col(7);
    faultloc::EtParams params;
    params.n_trees = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto model = faultloc::fit_forest(x, y, params, 5);
        benchmark::DoNotOptimize(&model);
    }
}
BENCHMARK(bench_forest_fit)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
