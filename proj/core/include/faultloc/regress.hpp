#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace faultloc {

enum class Penalty { None, L2, L1 };

// Objective conventions (documented here once, used everywhere):
//   L1 (Lasso):  (1/(2n))*||y - Xw||^2 + lambda*||w||_1
//     solved by cyclic coordinate descent with soft-thresholding, so lambda
//     is comparable across dataset sizes.
//   L2 (Ridge):  ||y - Xw||^2 + lambda*||w||^2
//     closed form (X'X + lambda*I)w = X'y; the unscaled convention of the
//     reference implementations the evaluation mirrors.
// Both fit on mean-centered X and y; intercept = mean(y) - mean_row(X)*w.
// Features are same-scale rates in [0,1], so no standardization.
struct FitConfig {
    double tolerance = 1e-6;  // L1 stop: max absolute coefficient change per sweep
    int max_iterations = 1000;
    std::uint64_t seed = 0;
};

// Optional coordinate-descent diagnostics (single-output L1 fits).
struct LassoDiag {
    std::vector<double> objective_per_sweep;
    double max_kkt_violation = 0.0;
    int sweeps = 0;
    bool converged = false;
};

struct LinearModel {
    Penalty penalty = Penalty::None;
    double lambda = 0.0;
    Eigen::MatrixXd weights;       // [n_features x n_outputs]
    Eigen::RowVectorXd intercept;  // [1 x n_outputs]
};

LinearModel fit_linear(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Penalty penalty,
                       double lambda, const FitConfig& config = {}, LassoDiag* diag = nullptr);
// Column-by-column multi-output fit sharing one design matrix (and, for L1,
// one Gram matrix) across outputs; the objective separates per column.
LinearModel fit_linear_multi(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, Penalty penalty,
                             double lambda, const FitConfig& config = {});

Eigen::MatrixXd predict_linear(const LinearModel& model, const Eigen::MatrixXd& x);

// Smallest lambda at which every Lasso weight is exactly zero:
// max_j |x_j'(y - mean(y))| / n under the (1/(2n)) objective scaling.
double lasso_deactivation_lambda(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

struct KnnModel {
    Eigen::MatrixXd x;  // stored training features
    Eigen::MatrixXd y;  // stored training targets (multi-output ready)
    int k = 5;
};

// Brute-force Euclidean k-NN; prediction is the unweighted mean of the k
// nearest training targets, distance ties broken by lower training-row index.
KnnModel fit_knn(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int k);
Eigen::MatrixXd predict_knn(const KnnModel& model, const Eigen::MatrixXd& x);

struct EtParams {
    int n_trees = 100;
    int max_depth = 12;
    int min_samples_leaf = 2;
    int n_candidates = 0;  // 0 = round(sqrt(n_features))
};

struct EtNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1, right = -1;
    double value = 0.0;  // leaf mean
};

struct ForestModel {
    EtParams params;
    std::uint64_t seed = 0;
    int n_features = 0;
    std::vector<std::vector<EtNode>> trees;
};

// Extremely randomized trees: full sample per tree (no bootstrap); at each
// node, each of a random feature subset draws one uniform threshold between
// the node's min and max, and the candidate minimizing the child residual
// sum of squares wins (a candidate must leave min_samples_leaf rows in both
// children). Deterministic given seed; tree seeds derive per tree index, and
// node statistics are row-set functions, so fits are invariant to training
// row permutation.
ForestModel fit_forest(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const EtParams& params,
                       std::uint64_t seed);
Eigen::VectorXd predict_forest(const ForestModel& model, const Eigen::MatrixXd& x);

// degree 1: X unchanged. degree 2: [X | squares | pairwise products with
// (i,j), i<j, in lexicographic index order]; no bias column. degree > 2
// rejected (combinatorial blowup at 210 features).
Eigen::MatrixXd polynomial_features(const Eigen::MatrixXd& x, int degree);

std::string linear_model_to_json(const LinearModel& model);
LinearModel linear_model_from_json(const std::string& text);
std::string knn_model_to_json(const KnnModel& model);
KnnModel knn_model_from_json(const std::string& text);
std::string forest_model_to_json(const ForestModel& model);
ForestModel forest_model_from_json(const std::string& text);

}  // namespace faultloc
