#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "faultloc/impute.hpp"
#include "faultloc/regress.hpp"

namespace faultloc {

// The localizer's regressor slot accepts the same estimator menu as the
// imputer (here OLS is legitimate: the training design is tall).
using PredictorSpec = EstimatorSpec;

// Multi-output model mapping a path-failure-rate row to per-component
// failure scores. Linear kinds train all outputs against one shared design;
// forests train one tree ensemble per component.
struct Localizer {
    PredictorSpec spec;
    int degree = 1;           // polynomial feature expansion applied internally
    int n_raw_features = 0;   // feature count BEFORE expansion
    std::vector<std::string> components;  // output order
    LinearModel linear;                   // Ols/Ridge/Lasso
    KnnModel knn;                         // Knn
    std::vector<ForestModel> forests;     // ExtraTrees, one per component
};

// X must be complete (impute first); labels, when given, must match Y's
// column count and become the component order (defaults to c0, c1, ...).
Localizer train_localizer(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                          const PredictorSpec& spec, int degree = 1, std::uint64_t seed = 0,
                          std::vector<std::string> labels = {});

// Raw (unclamped) predicted failure scores; ranking works on these directly
// since clamping would create spurious ties at zero.
Eigen::MatrixXd predict_failures(const Localizer& localizer, const Eigen::MatrixXd& x);
Eigen::VectorXd predict_failures_row(const Localizer& localizer, const Eigen::RowVectorXd& x);

// Indices of the k highest scores, descending, ties broken by ascending
// component index.
std::vector<int> top_k(const Eigen::VectorXd& scores, int k);

// Fraction of rows whose true component index ranks among the top k.
double top_k_accuracy(const Eigen::MatrixXd& predicted, const std::vector<int>& truth, int k);

// R^2 pooled over all cells jointly (SS_tot around the grand mean, uniform
// across outputs); errors when Y has zero variance. MSE over all cells.
double score_r2(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& truth);
double score_mse(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& truth);

std::string localizer_to_json(const Localizer& localizer);
Localizer localizer_from_json(const std::string& text);

// Long-form ranking export: sample,rank,component,score — the top `k` per
// sample (k <= 0 exports the full ranking).
std::string rankings_to_csv(const Eigen::MatrixXd& predicted,
                            const std::vector<std::string>& components, int k = 0);

}  // namespace faultloc
