#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "faultloc/impute.hpp"
#include "faultloc/localize.hpp"

namespace faultloc {

// Full experiment description; serializes to/from a single JSON document
// (key names match the field names below, estimators as display names like
// "lasso(0.0001)").
struct ExperimentConfig {
    std::string preset = "internet2-like";
    std::uint64_t topology_seed = 7;  // used by the "random" preset only
    std::vector<double> error_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    int transfers_per_pair = 100;
    int rounds_per_cell = 1;
    std::uint64_t data_seed = 7;
    double train_fraction = 0.7;
    std::vector<double> missing_rates = {0.0, 0.1, 0.3, 0.6};
    std::vector<EstimatorSpec> imputers = {{EstimatorSpec::Kind::Lasso, 1e-4, 5, {}}};
    std::vector<PredictorSpec> predictors = {{EstimatorSpec::Kind::Ridge, 0.1, 5, {}},
                                             {EstimatorSpec::Kind::Ridge, 0.01, 5, {}},
                                             {EstimatorSpec::Kind::Lasso, 1e-6, 5, {}},
                                             {EstimatorSpec::Kind::ExtraTrees, 0.0, 5, {}}};
    int degree = 1;                // polynomial expansion for the localizer
    int impute_max_rounds = 10;
    double impute_tolerance = 1e-3;
    std::uint64_t seed = 0;        // split, masks, and per-combination training seeds
    bool transductive = false;     // impute train+test jointly instead of separately
    std::string out_dir = "out";
    bool write_intermediates = true;
};

std::string experiment_config_to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const std::string& text);

// One (missing rate, imputer, predictor) cell of the sweep. Failed cells
// carry the error text and NaN metrics; they still appear exactly once.
struct EvalRecord {
    double rate = 0.0;
    std::string imputer;
    std::string predictor;
    bool ok = false;
    double imputation_rmse = std::numeric_limits<double>::quiet_NaN();  // train side
    double r2 = std::numeric_limits<double>::quiet_NaN();
    double mse = std::numeric_limits<double>::quiet_NaN();
    std::array<double, 4> top_k{std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN()};
    std::string error;  // empty when ok
};

struct EvalReport {
    ExperimentConfig config;
    int n_train = 0;
    int n_test = 0;
    std::vector<EvalRecord> records;  // rate-major, then imputer, then predictor
};

// Dataset generation -> seeded 70/30-style shuffled split -> per missing
// rate: one shared train mask and one shared test mask -> per imputer:
// separate train and test imputation (joint when transductive) -> per
// predictor: train on imputed train, evaluate on imputed test.
// Writes report.json, report.csv (metrics long form) and timings.csv (the
// only place wall time appears, keeping reports byte-reproducible) under
// config.out_dir, plus intermediate CSVs when write_intermediates.
EvalReport run_pipeline(const ExperimentConfig& config);

std::string report_to_json(const EvalReport& report);
std::string report_to_csv(const EvalReport& report);

}  // namespace faultloc
