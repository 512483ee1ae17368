#include "faultloc/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "faultloc/csv.hpp"
#include "faultloc/error.hpp"
#include "faultloc/faultsim.hpp"
#include "faultloc/missing.hpp"
#include "faultloc/rng.hpp"
#include "faultloc/routing.hpp"
#include "faultloc/topology.hpp"

namespace faultloc {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;

// Seed-derivation tags: every random decision in the pipeline hangs off
// config.seed through one of these, so combinations are independent and the
// whole run replays exactly.
enum : std::uint64_t { kSplitTag = 0, kMaskTag = 1, kImputeTag = 2, kTrainTag = 3 };

void validate_config(const ExperimentConfig& c) {
    if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0))
        throw Error("BadParams", "train_fraction must be in (0,1)");
    if (c.missing_rates.empty() || c.imputers.empty() || c.predictors.empty())
        throw Error("BadParams", "missing_rates, imputers and predictors must be non-empty");
    for (double r : c.missing_rates)
        if (!(r >= 0.0 && r < 1.0)) throw Error("BadParams", "missing rates must lie in [0,1)");
    if (c.impute_max_rounds < 1 || c.impute_tolerance <= 0.0)
        throw Error("BadParams", "bad imputer settings");
    if (c.degree < 1 || c.degree > 2) throw Error("BadParams", "degree must be 1 or 2");
    if (c.out_dir.empty()) throw Error("BadParams", "out_dir must be set");
}

MatrixXd gather_rows(const MatrixXd& x, const std::vector<int>& rows) {
    MatrixXd out(static_cast<Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = x.row(rows[i]);
    return out;
}

// The single-fault label of a sample row: the component with the largest
// injected probability (exactly one is positive by construction).
std::vector<int> labels_of(const MatrixXd& y) {
    std::vector<int> out(static_cast<std::size_t>(y.rows()));
    for (Index i = 0; i < y.rows(); ++i) {
        Index arg = 0;
        y.row(i).maxCoeff(&arg);
        out[static_cast<std::size_t>(i)] = static_cast<int>(arg);
    }
    return out;
}

std::string sanitize(const std::string& name) {
    std::string out;
    for (char ch : name) {
        if (ch == '(')
            out += '-';
        else if (ch == ')')
            continue;
        else
            out += ch;
    }
    return out;
}

struct Timing {
    std::string rate, imputer, predictor, stage;
    double milliseconds = 0.0;
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

nlohmann::ordered_json config_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["preset"] = c.preset;
    j["topology_seed"] = c.topology_seed;
    j["error_grid"] = c.error_grid;
    j["transfers_per_pair"] = c.transfers_per_pair;
    j["rounds_per_cell"] = c.rounds_per_cell;
    j["data_seed"] = c.data_seed;
    j["train_fraction"] = c.train_fraction;
    j["missing_rates"] = c.missing_rates;
    std::vector<std::string> imputers, predictors;
    for (const auto& s : c.imputers) imputers.push_back(estimator_name(s));
    for (const auto& s : c.predictors) predictors.push_back(estimator_name(s));
    j["imputers"] = imputers;
    j["predictors"] = predictors;
    j["degree"] = c.degree;
    j["impute_max_rounds"] = c.impute_max_rounds;
    j["impute_tolerance"] = c.impute_tolerance;
    j["seed"] = c.seed;
    j["transductive"] = c.transductive;
    j["out_dir"] = c.out_dir;
    j["write_intermediates"] = c.write_intermediates;
    return j;
}

nlohmann::ordered_json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

}  // namespace

std::string experiment_config_to_json(const ExperimentConfig& config) {
    return config_json(config).dump(2) + "\n";
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("MalformedJson", e.what());
    }
    ExperimentConfig c;
    try {
        if (j.contains("preset")) c.preset = j.at("preset").get<std::string>();
        if (j.contains("topology_seed")) c.topology_seed = j.at("topology_seed").get<std::uint64_t>();
        if (j.contains("error_grid")) c.error_grid = j.at("error_grid").get<std::vector<double>>();
        if (j.contains("transfers_per_pair"))
            c.transfers_per_pair = j.at("transfers_per_pair").get<int>();
        if (j.contains("rounds_per_cell")) c.rounds_per_cell = j.at("rounds_per_cell").get<int>();
        if (j.contains("data_seed")) c.data_seed = j.at("data_seed").get<std::uint64_t>();
        if (j.contains("train_fraction")) c.train_fraction = j.at("train_fraction").get<double>();
        if (j.contains("missing_rates"))
            c.missing_rates = j.at("missing_rates").get<std::vector<double>>();
        if (j.contains("imputers")) {
            c.imputers.clear();
            for (const auto& s : j.at("imputers"))
                c.imputers.push_back(estimator_from_name(s.get<std::string>()));
        }
        if (j.contains("predictors")) {
            c.predictors.clear();
            for (const auto& s : j.at("predictors"))
                c.predictors.push_back(estimator_from_name(s.get<std::string>()));
        }
        if (j.contains("degree")) c.degree = j.at("degree").get<int>();
        if (j.contains("impute_max_rounds"))
            c.impute_max_rounds = j.at("impute_max_rounds").get<int>();
        if (j.contains("impute_tolerance"))
            c.impute_tolerance = j.at("impute_tolerance").get<double>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("transductive")) c.transductive = j.at("transductive").get<bool>();
        if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
        if (j.contains("write_intermediates"))
            c.write_intermediates = j.at("write_intermediates").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw Error("MalformedJson", e.what());
    }
    validate_config(c);
    return c;
}

EvalReport run_pipeline(const ExperimentConfig& config) {
    validate_config(config);
    namespace fs = std::filesystem;
    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);
    std::vector<Timing> timings;

    Stopwatch gen_watch;
    const Topology topo = build_preset(config.preset, config.topology_seed);
    const RoutingTable routes = compute_routes(topo);
    GenOptions gen;
    gen.grid = config.error_grid;
    gen.transfers_per_pair = config.transfers_per_pair;
    gen.rounds_per_cell = config.rounds_per_cell;
    gen.seed = config.data_seed;
    const Dataset data = generate_dataset(topo, routes, gen);
    timings.push_back({"", "", "", "generate_dataset", gen_watch.ms()});

    const int n = static_cast<int>(data.X.rows());
    if (n < 4) throw Error("BadParams", "dataset too small to split");
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Rng split_rng(derive_seed(config.seed, {kSplitTag}));
    split_rng.shuffle(order);
    int n_train = static_cast<int>(std::lround(config.train_fraction * n));
    n_train = std::clamp(n_train, 1, n - 1);
    std::vector<int> train_rows(order.begin(), order.begin() + n_train);
    std::vector<int> test_rows(order.begin() + n_train, order.end());
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());

    const MatrixXd x_train = gather_rows(data.X, train_rows);
    const MatrixXd x_test = gather_rows(data.X, test_rows);
    const MatrixXd y_train = gather_rows(data.Y, train_rows);
    const MatrixXd y_test = gather_rows(data.Y, test_rows);
    const std::vector<int> truth_test = labels_of(y_test);

    if (config.write_intermediates) {
        write_text_file((out_dir / "topology.json").string(), topology_to_json(topo));
        write_matrix_csv((out_dir / "features.csv").string(), data.X, data.path_ids);
        write_matrix_csv((out_dir / "labels.csv").string(), data.Y, data.component_ids);
        std::ostringstream split_csv;
        split_csv << "row,role\n";
        for (int r : train_rows) split_csv << r << ",train\n";
        for (int r : test_rows) split_csv << r << ",test\n";
        write_text_file((out_dir / "split.csv").string(), split_csv.str());
    }

    EvalReport report;
    report.config = config;
    report.n_train = n_train;
    report.n_test = n - n_train;

    for (std::size_t ri = 0; ri < config.missing_rates.size(); ++ri) {
        const double rate = config.missing_rates[ri];
        const std::string rate_str = format_double(rate);
        // One mask pair per rate, shared by every imputer/predictor combo so
        // imputation quality comparisons see identical missingness.
        const Mask mask_train = sample_mask(n_train, static_cast<int>(data.X.cols()), rate,
                                            MaskMode::McarCell,
                                            derive_seed(config.seed, {kMaskTag, ri, 0}));
        const Mask mask_test = sample_mask(report.n_test, static_cast<int>(data.X.cols()), rate,
                                           MaskMode::McarCell,
                                           derive_seed(config.seed, {kMaskTag, ri, 1}));
        const MatrixXd masked_train = apply_mask(x_train, mask_train);
        const MatrixXd masked_test = apply_mask(x_test, mask_test);

        for (std::size_t ii = 0; ii < config.imputers.size(); ++ii) {
            const std::string imputer_name = estimator_name(config.imputers[ii]);
            const fs::path combo_dir =
                out_dir / ("rate_" + rate_str) / sanitize(imputer_name);
            if (config.write_intermediates) {
                fs::create_directories(combo_dir);
                write_matrix_csv((combo_dir / "masked_train.csv").string(), masked_train,
                                 data.path_ids);
                write_matrix_csv((combo_dir / "masked_test.csv").string(), masked_test,
                                 data.path_ids);
            }

            MatrixXd imputed_train, imputed_test;
            double train_rmse = std::numeric_limits<double>::quiet_NaN();
            std::string impute_error;
            if (rate == 0.0) {
                // Nothing to impute; the RMSE operation itself refuses a
                // zero-missing mask, so the report records an exact 0.
                imputed_train = x_train;
                imputed_test = x_test;
                train_rmse = 0.0;
            } else {
                ImputerConfig ic;
                ic.estimator = config.imputers[ii];
                ic.max_rounds = config.impute_max_rounds;
                ic.tolerance = config.impute_tolerance;
                ic.seed = derive_seed(config.seed, {kImputeTag, ri, ii});
                try {
                    if (config.transductive) {
                        MatrixXd joint(masked_train.rows() + masked_test.rows(),
                                       masked_train.cols());
                        joint << masked_train, masked_test;
                        Stopwatch w;
                        const ImputationResult res = impute(joint, ic);
                        timings.push_back(
                            {rate_str, imputer_name, "", "impute_joint", w.ms()});
                        imputed_train = res.completed.topRows(masked_train.rows());
                        imputed_test = res.completed.bottomRows(masked_test.rows());
                    } else {
                        Stopwatch wt;
                        const ImputationResult res_train = impute(masked_train, ic);
                        timings.push_back(
                            {rate_str, imputer_name, "", "impute_train", wt.ms()});
                        Stopwatch we;
                        const ImputationResult res_test = impute(masked_test, ic);
                        timings.push_back(
                            {rate_str, imputer_name, "", "impute_test", we.ms()});
                        imputed_train = res_train.completed;
                        imputed_test = res_test.completed;
                    }
                    train_rmse = imputation_rmse(x_train, imputed_train, mask_train);
                    if (config.write_intermediates) {
                        write_matrix_csv((combo_dir / "imputed_train.csv").string(),
                                         imputed_train, data.path_ids);
                        write_matrix_csv((combo_dir / "imputed_test.csv").string(), imputed_test,
                                         data.path_ids);
                    }
                } catch (const Error& e) {
                    impute_error = std::string(e.kind()) + ": " + e.what();
                } catch (const std::exception& e) {
                    impute_error = e.what();
                }
            }

            for (std::size_t pi = 0; pi < config.predictors.size(); ++pi) {
                EvalRecord rec;
                rec.rate = rate;
                rec.imputer = imputer_name;
                rec.predictor = estimator_name(config.predictors[pi]);
                if (!impute_error.empty()) {
                    rec.error = impute_error;
                    report.records.push_back(std::move(rec));
                    continue;
                }
                rec.imputation_rmse = train_rmse;
                try {
                    Stopwatch wt;
                    const Localizer loc = train_localizer(
                        imputed_train, y_train, config.predictors[pi], config.degree,
                        derive_seed(config.seed, {kTrainTag, ri, ii, pi}), data.component_ids);
                    timings.push_back({rate_str, imputer_name, rec.predictor, "train", wt.ms()});
                    Stopwatch wp;
                    const MatrixXd predicted = predict_failures(loc, imputed_test);
                    timings.push_back({rate_str, imputer_name, rec.predictor, "predict", wp.ms()});
                    rec.r2 = score_r2(predicted, y_test);
                    rec.mse = score_mse(predicted, y_test);
                    for (int k = 1; k <= 4; ++k)
                        rec.top_k[static_cast<std::size_t>(k - 1)] =
                            top_k_accuracy(predicted, truth_test, k);
                    rec.ok = true;
                    if (config.write_intermediates) {
                        write_matrix_csv(
                            (combo_dir / ("predictions_" + sanitize(rec.predictor) + ".csv"))
                                .string(),
                            predicted, data.component_ids);
                        write_text_file(
                            (combo_dir / ("rankings_" + sanitize(rec.predictor) + ".csv"))
                                .string(),
                            rankings_to_csv(predicted, data.component_ids, 4));
                    }
                } catch (const Error& e) {
                    rec.ok = false;
                    rec.error = std::string(e.kind()) + ": " + e.what();
                } catch (const std::exception& e) {
                    rec.ok = false;
                    rec.error = e.what();
                }
                report.records.push_back(std::move(rec));
            }
        }
    }

    write_text_file((out_dir / "report.json").string(), report_to_json(report));
    write_text_file((out_dir / "report.csv").string(), report_to_csv(report));
    std::ostringstream tcsv;
    tcsv << "rate,imputer,predictor,stage,milliseconds\n";
    for (const auto& t : timings)
        tcsv << t.rate << ',' << t.imputer << ',' << t.predictor << ',' << t.stage << ','
             << format_double(t.milliseconds) << '\n';
    write_text_file((out_dir / "timings.csv").string(), tcsv.str());
    return report;
}

std::string report_to_json(const EvalReport& report) {
    nlohmann::ordered_json j;
    j["config"] = config_json(report.config);
    j["n_train"] = report.n_train;
    j["n_test"] = report.n_test;
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const auto& r : report.records) {
        nlohmann::ordered_json rec;
        rec["rate"] = r.rate;
        rec["imputer"] = r.imputer;
        rec["predictor"] = r.predictor;
        rec["ok"] = r.ok;
        rec["imputation_rmse"] = finite_or_null(r.imputation_rmse);
        rec["r2"] = finite_or_null(r.r2);
        rec["mse"] = finite_or_null(r.mse);
        nlohmann::ordered_json tk = nlohmann::ordered_json::array();
        for (double v : r.top_k) tk.push_back(finite_or_null(v));
        rec["top_k"] = std::move(tk);
        rec["error"] = r.error.empty() ? nlohmann::ordered_json(nullptr)
                                       : nlohmann::ordered_json(r.error);
        records.push_back(std::move(rec));
    }
    j["records"] = std::move(records);
    return j.dump(2) + "\n";
}

std::string report_to_csv(const EvalReport& report) {
    std::ostringstream out;
    out << "rate,imputer,predictor,metric,value\n";
    for (const auto& r : report.records) {
        if (!r.ok) continue;  // failures live in report.json
        const std::string prefix =
            format_double(r.rate) + ',' + r.imputer + ',' + r.predictor + ',';
        out << prefix << "imputation_rmse," << format_double(r.imputation_rmse) << '\n';
        out << prefix << "r2," << format_double(r.r2) << '\n';
        out << prefix << "mse," << format_double(r.mse) << '\n';
        for (int k = 1; k <= 4; ++k)
            out << prefix << "top" << k << ','
                << format_double(r.top_k[static_cast<std::size_t>(k - 1)]) << '\n';
    }
    return out.str();
}

}  // namespace faultloc
