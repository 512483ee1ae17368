#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "faultloc/error.hpp"
#include "faultloc/regress.hpp"
#include "faultloc/rng.hpp"
#include "test_util.hpp"

using namespace faultloc;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

namespace {

MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    Rng rng(seed);
    MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.next_double();
    return m;
}

// direct objective evaluation for oracle checks
double lasso_objective(const MatrixXd& x, const VectorXd& y, const VectorXd& w, double b,
                       double lambda) {
    const VectorXd r = y - x * w - VectorXd::Constant(y.size(), b);
    return r.squaredNorm() / (2.0 * static_cast<double>(y.size())) + lambda * w.lpNorm<1>();
}

}  // namespace

TEST_CASE("ols recovers an exact linear relation, intercept included") {
    const MatrixXd x = random_matrix(40, 3, 1);
    VectorXd w_true(3);
    w_true << 2.0, -1.0, 0.5;
    const VectorXd y = (x * w_true).array() + 3.0;
    const LinearModel model = fit_linear(x, y, Penalty::None, 0.0);
    CHECK((model.weights.col(0) - w_true).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(model.intercept(0) == doctest::Approx(3.0).epsilon(1e-10));
    const MatrixXd pred = predict_linear(model, x);
    CHECK((pred.col(0) - y).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("ols refuses singular designs") {
    MatrixXd x = random_matrix(20, 3, 2);
    x.col(2) = x.col(0);  // exact duplicate column
    const VectorXd y = random_matrix(20, 1, 3);
    try {
        fit_linear(x, y, Penalty::None, 0.0);
        FAIL("expected a singularity error");
    } catch (const Error& e) {
        CHECK(e.kind() == "SingularMatrix");
    }
    // wide designs are singular by construction
    CHECK_THROWS_AS(fit_linear(random_matrix(4, 9, 4), random_matrix(4, 1, 5), Penalty::None, 0.0),
                    Error);
    // ridge with a positive penalty handles both
    CHECK_NOTHROW(fit_linear(x, y, Penalty::L2, 0.1));
    CHECK_NOTHROW(fit_linear(random_matrix(4, 9, 4), random_matrix(4, 1, 5), Penalty::L2, 0.1));
}

TEST_CASE("ridge solves its normal equations, primal and dual") {
    const FitConfig config;
    const double lambda = 0.37;
    for (auto [n, p, seed] : {std::tuple<int, int, int>{40, 6, 6}, {12, 30, 7}}) {
        const MatrixXd x = random_matrix(n, p, static_cast<std::uint64_t>(seed));
        const VectorXd y = random_matrix(n, 1, static_cast<std::uint64_t>(seed) + 100);
        const LinearModel model = fit_linear(x, y, Penalty::L2, lambda, config);
        const MatrixXd xc = x.rowwise() - x.colwise().mean();
        const VectorXd yc = y.array() - y.mean();
        // (Xc'Xc + lambda I) w = Xc' yc
        const VectorXd lhs = xc.transpose() * (xc * model.weights.col(0)) +
                             lambda * model.weights.col(0);
        const VectorXd rhs = xc.transpose() * yc;
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("ridge weight norm shrinks monotonically with the penalty") {
    const MatrixXd x = random_matrix(30, 5, 8);
    const VectorXd y = random_matrix(30, 1, 9);
    double previous = fit_linear(x, y, Penalty::None, 0.0).weights.col(0).norm();
    for (double lambda : {0.01, 0.1, 1.0, 10.0, 100.0}) {
        const double current = fit_linear(x, y, Penalty::L2, lambda).weights.col(0).norm();
        CHECK(current <= previous + 1e-12);
        previous = current;
    }
}

TEST_CASE("lasso with zero penalty matches least squares") {
    const MatrixXd x = random_matrix(50, 4, 10);
    const VectorXd y = random_matrix(50, 1, 11);
    const LinearModel ols = fit_linear(x, y, Penalty::None, 0.0);
    FitConfig config;
    config.tolerance = 1e-10;
    config.max_iterations = 20000;
    const LinearModel lasso = fit_linear(x, y, Penalty::L1, 0.0, config);
    CHECK((ols.weights - lasso.weights).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(std::abs(ols.intercept(0) - lasso.intercept(0)) < 1e-6);
}

TEST_CASE("single-feature lasso matches the soft-threshold closed form and a grid search") {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const MatrixXd x = random_matrix(30, 1, 100 + static_cast<std::uint64_t>(trial));
        const VectorXd y = 2.0 * x.col(0) +
                           0.3 * random_matrix(30, 1, 200 + static_cast<std::uint64_t>(trial)).col(0);
        const double lambda = 0.02 + 0.1 * rng.next_double();
        const LinearModel model = fit_linear(x, y, Penalty::L1, lambda);
        const double w_cd = model.weights(0, 0);

        // closed form on centered data
        const double n = 30.0;
        const VectorXd xc = x.col(0).array() - x.col(0).mean();
        const VectorXd yc = y.array() - y.mean();
        const double rho = xc.dot(yc) / n;
        const double gram = xc.squaredNorm();
        const double shrunk = (rho > lambda) ? rho - lambda : (rho < -lambda ? rho + lambda : 0.0);
        const double w_closed = shrunk * n / gram;
        CHECK(std::abs(w_cd - w_closed) < 1e-6);

        // brute-force grid around the solution
        double best_w = -5.0, best_obj = 1e300;
        for (double w = -5.0; w <= 5.0; w += 1e-3) {
            const double b = y.mean() - w * x.col(0).mean();
            const double obj = lasso_objective(x, y, VectorXd::Constant(1, w), b, lambda);
            if (obj < best_obj) {
                best_obj = obj;
                best_w = w;
            }
        }
        CHECK(std::abs(w_cd - best_w) < 2e-3);  // grid resolution
    }
}

TEST_CASE("lasso satisfies its optimality conditions on random problems") {
    FitConfig config;  // default tolerance 1e-6
    for (int trial = 0; trial < 20; ++trial) {
        const MatrixXd x = random_matrix(40, 5, 300 + static_cast<std::uint64_t>(trial));
        const VectorXd y = random_matrix(40, 1, 400 + static_cast<std::uint64_t>(trial));
        LassoDiag diag;
        fit_linear(x, y, Penalty::L1, 0.01, config, &diag);
        CHECK(diag.converged);
        CHECK(diag.max_kkt_violation <= 10.0 * config.tolerance);
        for (std::size_t s = 1; s < diag.objective_per_sweep.size(); ++s)
            CHECK(diag.objective_per_sweep[s] <= diag.objective_per_sweep[s - 1] + 1e-12);
    }
}

TEST_CASE("the deactivation penalty zeroes every lasso weight") {
    const MatrixXd x = random_matrix(25, 4, 13);
    const VectorXd y = random_matrix(25, 1, 14);
    const double lambda_max = lasso_deactivation_lambda(x, y);
    const LinearModel dead = fit_linear(x, y, Penalty::L1, lambda_max);
    CHECK(dead.weights.cwiseAbs().maxCoeff() == 0.0);
    const LinearModel dead2 = fit_linear(x, y, Penalty::L1, 2.0 * lambda_max);
    CHECK(dead2.weights.cwiseAbs().maxCoeff() == 0.0);
    // just below the threshold something activates
    const LinearModel alive = fit_linear(x, y, Penalty::L1, 0.9 * lambda_max);
    CHECK(alive.weights.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("feature permutation permutes the weights and nothing else") {
    const MatrixXd x = random_matrix(35, 4, 15);
    const VectorXd y = random_matrix(35, 1, 16);
    const std::vector<Eigen::Index> perm{2, 0, 3, 1};
    MatrixXd xp(35, 4);
    for (Eigen::Index j = 0; j < 4; ++j) xp.col(j) = x.col(perm[static_cast<std::size_t>(j)]);

    SUBCASE("ridge") {
        const LinearModel a = fit_linear(x, y, Penalty::L2, 0.3);
        const LinearModel b = fit_linear(xp, y, Penalty::L2, 0.3);
        for (Eigen::Index j = 0; j < 4; ++j)
            CHECK(std::abs(b.weights(j, 0) - a.weights(perm[static_cast<std::size_t>(j)], 0)) <
                  1e-9);
    }
    SUBCASE("lasso") {
        FitConfig config;
        config.tolerance = 1e-10;
        config.max_iterations = 50000;
        const LinearModel a = fit_linear(x, y, Penalty::L1, 0.01, config);
        const LinearModel b = fit_linear(xp, y, Penalty::L1, 0.01, config);
        for (Eigen::Index j = 0; j < 4; ++j)
            CHECK(std::abs(b.weights(j, 0) - a.weights(perm[static_cast<std::size_t>(j)], 0)) <
                  1e-6);
    }
}

TEST_CASE("wide lasso designs run in residual mode and still reach optimality") {
    // 1100 columns exceeds the Gram-mode width limit
    const Eigen::Index n = 60, p = 1100;
    const MatrixXd x = random_matrix(n, p, 17);
    VectorXd w_true = VectorXd::Zero(p);
    w_true.head(5).setConstant(1.0);
    const VectorXd y = x * w_true;
    FitConfig config;
    LassoDiag diag;
    const LinearModel model = fit_linear(x, y, Penalty::L1, 0.05, config, &diag);
    CHECK(diag.max_kkt_violation <= 10.0 * config.tolerance);
    // sparsity: far fewer active weights than columns
    int active = 0;
    for (Eigen::Index j = 0; j < p; ++j) active += model.weights(j, 0) != 0.0 ? 1 : 0;
    CHECK(active < 60);
}

TEST_CASE("multi-output fits equal independent per-column fits") {
    const MatrixXd x = random_matrix(30, 4, 18);
    const MatrixXd y = random_matrix(30, 3, 19);
    SUBCASE("ridge") {
        const LinearModel joint = fit_linear_multi(x, y, Penalty::L2, 0.2);
        for (Eigen::Index c = 0; c < 3; ++c) {
            const LinearModel single = fit_linear(x, y.col(c), Penalty::L2, 0.2);
            CHECK((joint.weights.col(c) - single.weights.col(0)).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(std::abs(joint.intercept(c) - single.intercept(0)) < 1e-12);
        }
    }
    SUBCASE("lasso") {
        const LinearModel joint = fit_linear_multi(x, y, Penalty::L1, 0.01);
        for (Eigen::Index c = 0; c < 3; ++c) {
            const LinearModel single = fit_linear(x, y.col(c), Penalty::L1, 0.01);
            CHECK((joint.weights.col(c) - single.weights.col(0)).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("fit inputs are validated") {
    const MatrixXd x = random_matrix(10, 2, 20);
    const VectorXd y = random_matrix(10, 1, 21);
    CHECK_THROWS_AS(fit_linear(x, random_matrix(9, 1, 22), Penalty::L2, 0.1), Error);
    CHECK_THROWS_AS(fit_linear(x, y, Penalty::L2, -1.0), Error);
    CHECK_THROWS_AS(fit_linear(x, y, Penalty::None, 0.5), Error);
    MatrixXd bad = x;
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(fit_linear(bad, y, Penalty::L2, 0.1), Error);
    const LinearModel model = fit_linear(x, y, Penalty::L2, 0.1);
    CHECK_THROWS_AS(predict_linear(model, random_matrix(5, 3, 23)), Error);
}

TEST_CASE("knn predicts neighbor means with index tie-breaking") {
    MatrixXd x(4, 1);
    x << 0.0, 1.0, 2.0, 10.0;
    MatrixXd y(4, 1);
    y << 0.0, 1.0, 2.0, 10.0;
    const KnnModel model = fit_knn(x, y, 2);
    MatrixXd q(1, 1);
    q << 1.1;
    CHECK(predict_knn(model, q)(0, 0) == doctest::Approx(1.5).epsilon(1e-12));

    // equidistant neighbors resolve to the lower training-row index
    MatrixXd x2(2, 1);
    x2 << 0.0, 2.0;
    MatrixXd y2(2, 1);
    y2 << 5.0, 9.0;
    const KnnModel tie = fit_knn(x2, y2, 1);
    MatrixXd mid(1, 1);
    mid << 1.0;
    CHECK(predict_knn(tie, mid)(0, 0) == 5.0);

    // k = 1 recalls training targets exactly
    const KnnModel recall = fit_knn(x, y, 1);
    CHECK(bit_equal(predict_knn(recall, x), y));

    CHECK_THROWS_AS(fit_knn(x, y, 0), Error);
    CHECK_THROWS_AS(fit_knn(x, y, 5), Error);
}

TEST_CASE("knn handles multi-output targets") {
    MatrixXd x(3, 1);
    x << 0.0, 1.0, 2.0;
    MatrixXd y(3, 2);
    y << 1.0, 10.0, 2.0, 20.0, 3.0, 30.0;
    const KnnModel model = fit_knn(x, y, 2);
    MatrixXd q(1, 1);
    q << 0.4;  // neighbors: rows 0 and 1
    const MatrixXd pred = predict_knn(model, q);
    CHECK(pred(0, 0) == doctest::Approx(1.5));
    CHECK(pred(0, 1) == doctest::Approx(15.0));
}

TEST_CASE("forests are deterministic given a seed") {
    const MatrixXd x = random_matrix(60, 6, 24);
    const VectorXd y = x.col(0) + 0.5 * x.col(3);
    EtParams params;
    params.n_trees = 10;
    const ForestModel a = fit_forest(x, y, params, 5);
    const ForestModel b = fit_forest(x, y, params, 5);
    CHECK(forest_model_to_json(a) == forest_model_to_json(b));
    const ForestModel c = fit_forest(x, y, params, 6);
    CHECK(forest_model_to_json(a) != forest_model_to_json(c));
}

TEST_CASE("forest training is invariant to row order") {
    const Eigen::Index n = 50;
    const MatrixXd x = random_matrix(n, 4, 25);
    const VectorXd y = x.col(1);
    EtParams params;
    params.n_trees = 8;
    const ForestModel base = fit_forest(x, y, params, 7);

    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    Rng rng(26);
    rng.shuffle(perm);
    MatrixXd xp(n, 4);
    VectorXd yp(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        xp.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
        yp(i) = y(perm[static_cast<std::size_t>(i)]);
    }
    const ForestModel shuffled = fit_forest(xp, yp, params, 7);
    const MatrixXd probe = random_matrix(20, 4, 27);
    const VectorXd pa = predict_forest(base, probe);
    const VectorXd pb = predict_forest(shuffled, probe);
    CHECK((pa - pb).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("forests fit signal and respect structural limits") {
    const MatrixXd x = random_matrix(200, 3, 28);
    const VectorXd y = x.col(0);
    EtParams params;
    params.n_trees = 40;
    const ForestModel model = fit_forest(x, y, params, 1);
    const VectorXd pred = predict_forest(model, x);
    const double mse = (pred - y).squaredNorm() / 200.0;
    CHECK(mse < 0.02);  // variance of U(0,1) is 1/12, so this is a real fit

    // constant targets produce constant predictions
    const VectorXd flat = VectorXd::Constant(200, 0.7);
    const ForestModel trivial = fit_forest(x, flat, params, 2);
    CHECK((predict_forest(trivial, x).array() - 0.7).abs().maxCoeff() < 1e-12);

    // depth 1 means at most a root and two leaves
    EtParams stump;
    stump.n_trees = 5;
    stump.max_depth = 1;
    const ForestModel stumps = fit_forest(x, y, stump, 3);
    for (const auto& tree : stumps.trees) CHECK(tree.size() <= 3);

    EtParams leafy;
    leafy.min_samples_leaf = 3;
    CHECK_THROWS_AS(fit_forest(random_matrix(5, 2, 29), random_matrix(5, 1, 30), leafy, 0),
                    Error);
}

TEST_CASE("polynomial features expand exactly as documented") {
    MatrixXd x(1, 2);
    x << 3.0, 5.0;
    CHECK(bit_equal(polynomial_features(x, 1), x));
    const MatrixXd ex = polynomial_features(x, 2);
    REQUIRE(ex.cols() == 5);
    CHECK(ex(0, 0) == 3.0);
    CHECK(ex(0, 1) == 5.0);
    CHECK(ex(0, 2) == 9.0);
    CHECK(ex(0, 3) == 25.0);
    CHECK(ex(0, 4) == 15.0);

    // the reference feature width: 210 paths expand to 22365 columns
    const MatrixXd wide = polynomial_features(random_matrix(2, 210, 31), 2);
    CHECK(wide.cols() == 22365);

    CHECK_THROWS_AS(polynomial_features(x, 0), Error);
    CHECK_THROWS_AS(polynomial_features(x, 3), Error);
}

TEST_CASE("pairwise product columns come in lexicographic index order") {
    MatrixXd x(1, 3);
    x << 2.0, 3.0, 5.0;
    const MatrixXd ex = polynomial_features(x, 2);
    REQUIRE(ex.cols() == 9);
    // [x0 x1 x2 | x0^2 x1^2 x2^2 | x0x1 x0x2 x1x2]
    CHECK(ex(0, 6) == 6.0);
    CHECK(ex(0, 7) == 10.0);
    CHECK(ex(0, 8) == 15.0);
}

TEST_CASE("models serialize to json and back without changing predictions") {
    const MatrixXd x = random_matrix(25, 3, 32);
    const VectorXd y = random_matrix(25, 1, 33);
    const MatrixXd probe = random_matrix(7, 3, 34);

    SUBCASE("linear") {
        const LinearModel model = fit_linear(x, y, Penalty::L2, 0.05);
        const LinearModel back = linear_model_from_json(linear_model_to_json(model));
        CHECK(back.penalty == model.penalty);
        CHECK(back.lambda == model.lambda);
        CHECK(bit_equal(predict_linear(back, probe), predict_linear(model, probe)));
    }
    SUBCASE("knn") {
        const KnnModel model = fit_knn(x, y, 3);
        const KnnModel back = knn_model_from_json(knn_model_to_json(model));
        CHECK(bit_equal(predict_knn(back, probe), predict_knn(model, probe)));
    }
    SUBCASE("forest") {
        EtParams params;
        params.n_trees = 6;
        const ForestModel model = fit_forest(x, y, params, 4);
        const ForestModel back = forest_model_from_json(forest_model_to_json(model));
        const VectorXd pa = predict_forest(model, probe);
        const VectorXd pb = predict_forest(back, probe);
        CHECK((pa - pb).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("malformed json is rejected") {
        CHECK_THROWS_AS(linear_model_from_json("{"), Error);
        CHECK_THROWS_AS(knn_model_from_json("{\"kind\":\"linear\"}"), Error);
        CHECK_THROWS_AS(forest_model_from_json("[]"), Error);
    }
}
