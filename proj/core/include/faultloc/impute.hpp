#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "faultloc/missing.hpp"
#include "faultloc/regress.hpp"

namespace faultloc {

// Estimator menu shared by the imputer and the localizer's predictor slot.
// lambda applies to Ridge/Lasso, k to Knn, et to ExtraTrees; Ols is only
// meaningful as a predictor (an imputer design is routinely singular).
struct EstimatorSpec {
    enum class Kind { Ols, Ridge, Lasso, Knn, ExtraTrees };
    Kind kind = Kind::Ridge;
    double lambda = 0.1;
    int k = 5;
    EtParams et;
};

// Short display/report name, e.g. "ridge(0.1)", "lasso(0.0001)", "knn(5)",
// "extratrees". Stable across runs (canonical shortest float formatting).
std::string estimator_name(const EstimatorSpec& spec);
// Parses the same shapes estimator_name emits, plus bare kind names.
EstimatorSpec estimator_from_name(const std::string& text);

enum class InitialFill { ColumnMean, Zero };

struct ImputerConfig {
    EstimatorSpec estimator{EstimatorSpec::Kind::Lasso, 1e-4, 5, {}};
    int max_rounds = 10;
    double tolerance = 1e-3;
    std::uint64_t seed = 0;
    InitialFill initial_fill = InitialFill::ColumnMean;
};

struct ImputationResult {
    Eigen::MatrixXd completed;
    int rounds_used = 0;
    bool converged = false;
    std::vector<double> round_deltas;  // max absolute imputed-cell change per round
};

// Round-robin multivariate imputation: each incomplete column is regressed
// on all other columns (at their current values) over the rows where it is
// observed, and its missing cells are overwritten with clamped predictions.
// Columns are visited in ascending missing count (ties by index); rounds stop
// when no imputed cell moves by tolerance or more, or at max_rounds.
// The input marks missing cells with NaN. Observed cells pass through
// bit-exactly. A complete input returns unchanged with rounds_used = 0.
ImputationResult impute(const Eigen::MatrixXd& masked, const ImputerConfig& config);

// Univariate baseline: every missing cell becomes its column's observed
// mean (all-missing columns fall back to the global observed mean).
ImputationResult mean_fill(const Eigen::MatrixXd& masked);

// RMSE between original and completed over the mask's MISSING cells only.
// Errors when the mask has no missing cells (the quantity is undefined).
double imputation_rmse(const Eigen::MatrixXd& original, const Eigen::MatrixXd& completed,
                       const Mask& mask);

// JSON convergence report for an imputation run.
std::string imputation_report_json(const ImputationResult& result);

}  // namespace faultloc
