// Command-line front end: each subcommand wraps one library operation with
// file I/O. Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "faultloc/csv.hpp"
#include "faultloc/error.hpp"
#include "faultloc/faultsim.hpp"
#include "faultloc/impute.hpp"
#include "faultloc/localize.hpp"
#include "faultloc/missing.hpp"
#include "faultloc/pipeline.hpp"
#include "faultloc/rng.hpp"
#include "faultloc/routing.hpp"
#include "faultloc/topology.hpp"

namespace {

using faultloc::EstimatorSpec;

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-")
        std::cout << text;
    else
        faultloc::write_text_file(out_path, text);
}

std::vector<int> label_indices(const Eigen::MatrixXd& y) {
    std::vector<int> out(static_cast<std::size_t>(y.rows()));
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        Eigen::Index arg = 0;
        y.row(i).maxCoeff(&arg);
        out[static_cast<std::size_t>(i)] = static_cast<int>(arg);
    }
    return out;
}

faultloc::Topology make_topology(const std::string& preset, std::uint64_t seed, int hosts,
                                 int routers, int extra_links) {
    if (preset == "random") {
        faultloc::RandomTopoParams params;
        if (hosts > 0) params.n_hosts = hosts;
        if (routers > 0) params.n_routers = routers;
        if (extra_links >= 0) params.extra_links = extra_links;
        return faultloc::build_random(params, seed);
    }
    return faultloc::build_preset(preset, seed);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fault localization toolkit: simulate, mask, impute, localize"};
    app.require_subcommand(1);

    // --- topo ---
    auto* topo_cmd = app.add_subcommand("topo", "build a topology and print it as JSON");
    std::string topo_preset = "internet2-like", topo_out = "-";
    std::uint64_t topo_seed = 7;
    int topo_hosts = 0, topo_routers = 0, topo_extra = -1;
    topo_cmd->add_option("--preset", topo_preset, "internet2-like | ring | random");
    topo_cmd->add_option("--seed", topo_seed, "seed for the random preset");
    topo_cmd->add_option("--hosts", topo_hosts, "host count (random preset)");
    topo_cmd->add_option("--routers", topo_routers, "router count (random preset)");
    topo_cmd->add_option("--extra-links", topo_extra, "extra backbone links (random preset)");
    topo_cmd->add_option("--out", topo_out, "output file, - for stdout");

    // --- gen ---
    auto* gen_cmd = app.add_subcommand("gen", "generate a labeled fault dataset");
    std::string gen_preset = "internet2-like", gen_topo_file, gen_out;
    std::uint64_t gen_seed = 0, gen_topo_seed = 7;
    std::vector<double> gen_grid;
    int gen_transfers = 100, gen_rounds = 1;
    gen_cmd->add_option("--preset", gen_preset, "topology preset");
    gen_cmd->add_option("--topo", gen_topo_file, "topology JSON file (overrides --preset)");
    gen_cmd->add_option("--seed", gen_seed, "dataset seed");
    gen_cmd->add_option("--topo-seed", gen_topo_seed, "seed for the random preset");
    gen_cmd->add_option("--grid", gen_grid, "error probability grid")->delimiter(',');
    gen_cmd->add_option("--transfers", gen_transfers, "transfers per path per sample");
    gen_cmd->add_option("--rounds", gen_rounds, "rounds per (component, grid) cell");
    gen_cmd->add_option("--out", gen_out, "output directory")->required();

    // --- mask ---
    auto* mask_cmd = app.add_subcommand("mask", "hide cells of a feature matrix at random");
    std::string mask_in, mask_out, mask_mask_out, mask_mode = "mcar";
    double mask_rate = 0.1;
    std::uint64_t mask_seed = 0;
    mask_cmd->add_option("--in", mask_in, "input features CSV")->required();
    mask_cmd->add_option("--rate", mask_rate, "missing rate in [0,1)");
    mask_cmd->add_option("--mode", mask_mode, "mcar | column-drop");
    mask_cmd->add_option("--seed", mask_seed, "mask seed");
    mask_cmd->add_option("--out", mask_out, "masked CSV output")->required();
    mask_cmd->add_option("--mask-out", mask_mask_out, "optional 0/1 mask CSV");

    // --- impute ---
    auto* imp_cmd = app.add_subcommand("impute", "fill missing cells of a masked matrix");
    std::string imp_in, imp_out, imp_report, imp_estimator = "lasso", imp_fill = "mean";
    double imp_lambda = -1.0, imp_tol = 1e-3;
    int imp_k = -1, imp_rounds = 10;
    std::uint64_t imp_seed = 0;
    imp_cmd->add_option("--in", imp_in, "masked CSV (empty fields = missing)")->required();
    imp_cmd->add_option("--estimator", imp_estimator,
                        "mean | ols | ridge | lasso | knn | extratrees");
    imp_cmd->add_option("--lambda", imp_lambda, "penalty for ridge/lasso");
    imp_cmd->add_option("--k", imp_k, "neighbor count for knn");
    imp_cmd->add_option("--max-rounds", imp_rounds, "imputation round cap");
    imp_cmd->add_option("--tol", imp_tol, "convergence tolerance");
    imp_cmd->add_option("--seed", imp_seed, "estimator seed");
    imp_cmd->add_option("--fill", imp_fill, "initial fill: mean | zero");
    imp_cmd->add_option("--out", imp_out, "completed CSV output")->required();
    imp_cmd->add_option("--report", imp_report, "optional convergence report JSON");

    // --- train ---
    auto* train_cmd = app.add_subcommand("train", "train a localizer on complete data");
    std::string train_x, train_y, train_out, train_predictor = "ridge";
    double train_lambda = -1.0;
    int train_k = -1, train_degree = 1;
    std::uint64_t train_seed = 0;
    train_cmd->add_option("--features", train_x, "features CSV")->required();
    train_cmd->add_option("--labels", train_y, "labels CSV")->required();
    train_cmd->add_option("--predictor", train_predictor,
                          "ols | ridge | lasso | knn | extratrees");
    train_cmd->add_option("--lambda", train_lambda, "penalty for ridge/lasso");
    train_cmd->add_option("--k", train_k, "neighbor count for knn");
    train_cmd->add_option("--degree", train_degree, "polynomial feature degree (1 or 2)");
    train_cmd->add_option("--seed", train_seed, "training seed (forests)");
    train_cmd->add_option("--out", train_out, "model JSON output")->required();

    // --- eval ---
    auto* eval_cmd = app.add_subcommand("eval", "score a trained localizer on a test set");
    std::string eval_model, eval_x, eval_y, eval_out = "-", eval_rankings;
    eval_cmd->add_option("--model", eval_model, "model JSON from train")->required();
    eval_cmd->add_option("--features", eval_x, "features CSV")->required();
    eval_cmd->add_option("--labels", eval_y, "labels CSV")->required();
    eval_cmd->add_option("--out", eval_out, "metrics JSON output, - for stdout");
    eval_cmd->add_option("--rankings", eval_rankings, "optional top-4 rankings CSV");

    // --- pipeline ---
    auto* pipe_cmd = app.add_subcommand("pipeline", "run a full experiment sweep");
    std::string pipe_config, pipe_out_dir;
    pipe_cmd->add_option("--config", pipe_config, "experiment config JSON")->required();
    pipe_cmd->add_option("--out-dir", pipe_out_dir, "override the config's output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, std::cout, std::cerr);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*topo_cmd) {
            const auto topo =
                make_topology(topo_preset, topo_seed, topo_hosts, topo_routers, topo_extra);
            emit(topo_out, faultloc::topology_to_json(topo));
        } else if (*gen_cmd) {
            faultloc::Topology topo;
            if (!gen_topo_file.empty())
                topo = faultloc::topology_from_json(faultloc::read_text_file(gen_topo_file));
            else
                topo = make_topology(gen_preset, gen_topo_seed, 0, 0, -1);
            faultloc::GenOptions options;
            if (!gen_grid.empty()) options.grid = gen_grid;
            options.transfers_per_pair = gen_transfers;
            options.rounds_per_cell = gen_rounds;
            options.seed = gen_seed;
            const auto data = faultloc::generate_dataset(topo, options);
            const std::string dir = gen_out.back() == '/' ? gen_out : gen_out + "/";
            std::filesystem::create_directories(dir);
            faultloc::write_matrix_csv(dir + "features.csv", data.X, data.path_ids);
            faultloc::write_matrix_csv(dir + "labels.csv", data.Y, data.component_ids);
            faultloc::write_text_file(dir + "topology.json", faultloc::topology_to_json(topo));
            faultloc::write_text_file(dir + "provenance.json",
                                      faultloc::provenance_to_json(options));
            std::cerr << "wrote " << data.X.rows() << " samples x " << data.X.cols()
                      << " paths to " << dir << "\n";
        } else if (*mask_cmd) {
            const auto csv = faultloc::read_matrix_csv(mask_in);
            faultloc::MaskMode mode;
            if (mask_mode == "mcar")
                mode = faultloc::MaskMode::McarCell;
            else if (mask_mode == "column-drop")
                mode = faultloc::MaskMode::ColumnDrop;
            else
                throw faultloc::Error("BadParams", "unknown mask mode: " + mask_mode);
            const auto mask =
                faultloc::sample_mask(static_cast<int>(csv.values.rows()),
                                      static_cast<int>(csv.values.cols()), mask_rate, mode,
                                      mask_seed);
            faultloc::write_matrix_csv(mask_out, faultloc::apply_mask(csv.values, mask),
                                       csv.header);
            if (!mask_mask_out.empty())
                faultloc::write_text_file(mask_mask_out, faultloc::mask_to_csv(mask));
        } else if (*imp_cmd) {
            const auto csv = faultloc::read_matrix_csv(imp_in);
            faultloc::ImputationResult result;
            if (imp_estimator == "mean") {
                result = faultloc::mean_fill(csv.values);
            } else {
                faultloc::ImputerConfig config;
                config.estimator = faultloc::estimator_from_name(imp_estimator);
                if (imp_lambda >= 0.0) config.estimator.lambda = imp_lambda;
                if (imp_k > 0) config.estimator.k = imp_k;
                config.max_rounds = imp_rounds;
                config.tolerance = imp_tol;
                config.seed = imp_seed;
                if (imp_fill == "zero")
                    config.initial_fill = faultloc::InitialFill::Zero;
                else if (imp_fill != "mean")
                    throw faultloc::Error("BadParams", "unknown initial fill: " + imp_fill);
                result = faultloc::impute(csv.values, config);
            }
            if (!csv.values.hasNaN())
                std::cerr << "warning: input has no missing cells; output equals input\n";
            faultloc::write_matrix_csv(imp_out, result.completed, csv.header);
            if (!imp_report.empty())
                faultloc::write_text_file(imp_report, faultloc::imputation_report_json(result));
        } else if (*train_cmd) {
            const auto xs = faultloc::read_matrix_csv(train_x);
            const auto ys = faultloc::read_matrix_csv(train_y);
            EstimatorSpec spec = faultloc::estimator_from_name(train_predictor);
            if (train_lambda >= 0.0) spec.lambda = train_lambda;
            if (train_k > 0) spec.k = train_k;
            const auto loc = faultloc::train_localizer(xs.values, ys.values, spec, train_degree,
                                                       train_seed, ys.header);
            faultloc::write_text_file(train_out, faultloc::localizer_to_json(loc));
        } else if (*eval_cmd) {
            const auto loc =
                faultloc::localizer_from_json(faultloc::read_text_file(eval_model));
            const auto xs = faultloc::read_matrix_csv(eval_x);
            const auto ys = faultloc::read_matrix_csv(eval_y);
            const auto predicted = faultloc::predict_failures(loc, xs.values);
            const auto truth = label_indices(ys.values);
            std::ostringstream metrics;
            metrics << "{\n  \"r2\": " << faultloc::format_double(
                           faultloc::score_r2(predicted, ys.values))
                    << ",\n  \"mse\": "
                    << faultloc::format_double(faultloc::score_mse(predicted, ys.values))
                    << ",\n  \"top_k\": [";
            const int k_max = std::min<int>(4, static_cast<int>(predicted.cols()));
            for (int k = 1; k <= k_max; ++k)
                metrics << (k > 1 ? ", " : "")
                        << faultloc::format_double(
                               faultloc::top_k_accuracy(predicted, truth, k));
            metrics << "]\n}\n";
            emit(eval_out, metrics.str());
            if (!eval_rankings.empty())
                faultloc::write_text_file(
                    eval_rankings, faultloc::rankings_to_csv(predicted, loc.components, 4));
        } else if (*pipe_cmd) {
            auto config = faultloc::experiment_config_from_json(
                faultloc::read_text_file(pipe_config));
            if (!pipe_out_dir.empty()) config.out_dir = pipe_out_dir;
            const auto report = faultloc::run_pipeline(config);
            int failed = 0;
            for (const auto& r : report.records)
                if (!r.ok) ++failed;
            std::cerr << "pipeline complete: " << report.records.size() << " combinations ("
                      << failed << " failed), reports in " << config.out_dir << "\n";
        }
    } catch (const faultloc::Error& e) {
        std::cerr << "error (" << e.kind() << "): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
