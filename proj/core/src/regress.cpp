#include "faultloc/regress.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "faultloc/error.hpp"
#include "faultloc/rng.hpp"

namespace faultloc {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

// Above this width the Gram matrix stops paying for itself (memory and the
// O(p^2) column updates); coordinate descent then runs on residuals instead.
constexpr Index kGramWidthLimit = 1024;

void check_xy(const MatrixXd& x, Index y_rows) {
    if (x.rows() == 0 || x.cols() == 0)
        throw Error("BadShape", "fit requires a non-empty design matrix");
    if (x.rows() != y_rows)
        throw Error("BadShape", "X and y row counts differ");
    if (!x.allFinite())
        throw Error("BadValue", "design matrix contains NaN or infinity");
}

double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

// Closed-form solve for None/L2 on centered data, all outputs at once.
MatrixXd solve_linear_system(const MatrixXd& xc, const MatrixXd& yc, Penalty penalty,
                             double lambda) {
    const Index n = xc.rows(), p = xc.cols();
    if (penalty == Penalty::None || lambda == 0.0) {
        Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(xc);
        if (cod.rank() < p)
            throw Error("SingularMatrix",
                        "unpenalized least squares needs a full-column-rank design (rank " +
                            std::to_string(cod.rank()) + " of " + std::to_string(p) + ")");
        return cod.solve(yc);
    }
    if (p <= n) {
        MatrixXd gram = xc.transpose() * xc;
        gram.diagonal().array() += lambda;
        return Eigen::LLT<MatrixXd>(gram).solve(xc.transpose() * yc);
    }
    // Dual route for wide designs: w = X'(XX' + lambda I)^-1 y.
    MatrixXd outer = xc * xc.transpose();
    outer.diagonal().array() += lambda;
    return xc.transpose() * Eigen::LLT<MatrixXd>(outer).solve(yc);
}

struct LassoResult {
    VectorXd w;
    int sweeps = 0;
    bool converged = false;
};

// Gram-mode coordinate descent for one output. Maintains q = G*w so each
// coordinate update is O(p). gram/corr are built on centered data.
LassoResult lasso_cd_gram(const MatrixXd& gram, const VectorXd& corr, double y_sq_norm, Index n,
                          double lambda, const FitConfig& config, LassoDiag* diag) {
    const Index p = gram.rows();
    const double dn = static_cast<double>(n);
    VectorXd w = VectorXd::Zero(p);
    VectorXd q = VectorXd::Zero(p);
    LassoResult out;
    for (int sweep = 0; sweep < config.max_iterations; ++sweep) {
        double max_delta = 0.0;
        for (Index j = 0; j < p; ++j) {
            const double gjj = gram(j, j);
            if (gjj <= 0.0) continue;  // constant column: weight stays zero
            const double rho = (corr(j) - q(j) + gjj * w(j)) / dn;
            const double w_new = soft_threshold(rho, lambda) * dn / gjj;
            const double delta = w_new - w(j);
            if (delta != 0.0) {
                q += gram.col(j) * delta;
                w(j) = w_new;
                max_delta = std::max(max_delta, std::abs(delta));
            }
        }
        out.sweeps = sweep + 1;
        if (diag) {
            const double rss = y_sq_norm - 2.0 * w.dot(corr) + w.dot(q);
            diag->objective_per_sweep.push_back(rss / (2.0 * dn) +
                                                lambda * w.template lpNorm<1>());
        }
        if (max_delta < config.tolerance) {
            out.converged = true;
            break;
        }
    }
    if (diag) {
        // KKT residual of the final iterate: gradient of the smooth part must
        // sit inside the subdifferential of lambda*||w||_1.
        double worst = 0.0;
        const VectorXd grad = (q - corr) / dn;  // d/dw of (1/(2n))||y-Xw||^2
        for (Index j = 0; j < p; ++j) {
            double v = 0.0;
            if (w(j) > 0.0)
                v = std::abs(grad(j) + lambda);
            else if (w(j) < 0.0)
                v = std::abs(grad(j) - lambda);
            else
                v = std::max(0.0, std::abs(grad(j)) - lambda);
            worst = std::max(worst, v);
        }
        diag->max_kkt_violation = worst;
    }
    out.w = std::move(w);
    return out;
}

// Residual-mode coordinate descent for wide designs (no Gram materialized;
// xc is the centered design). Maintains r = y - X*w.
LassoResult lasso_cd_residual(const MatrixXd& xc, const VectorXd& yc, const VectorXd& col_sq,
                              double lambda, const FitConfig& config, LassoDiag* diag) {
    const Index n = xc.rows(), p = xc.cols();
    const double dn = static_cast<double>(n);
    VectorXd w = VectorXd::Zero(p);
    VectorXd r = yc;
    LassoResult out;
    for (int sweep = 0; sweep < config.max_iterations; ++sweep) {
        double max_delta = 0.0;
        for (Index j = 0; j < p; ++j) {
            const double gjj = col_sq(j);
            if (gjj <= 0.0) continue;
            const double rho = (xc.col(j).dot(r) + gjj * w(j)) / dn;
            const double w_new = soft_threshold(rho, lambda) * dn / gjj;
            const double delta = w_new - w(j);
            if (delta != 0.0) {
                r -= xc.col(j) * delta;
                w(j) = w_new;
                max_delta = std::max(max_delta, std::abs(delta));
            }
        }
        out.sweeps = sweep + 1;
        if (diag)
            diag->objective_per_sweep.push_back(r.squaredNorm() / (2.0 * dn) +
                                                lambda * w.template lpNorm<1>());
        if (max_delta < config.tolerance) {
            out.converged = true;
            break;
        }
    }
    if (diag) {
        double worst = 0.0;
        for (Index j = 0; j < p; ++j) {
            const double g = -xc.col(j).dot(r) / dn;
            double v = 0.0;
            if (w(j) > 0.0)
                v = std::abs(g + lambda);
            else if (w(j) < 0.0)
                v = std::abs(g - lambda);
            else
                v = std::max(0.0, std::abs(g) - lambda);
            worst = std::max(worst, v);
        }
        diag->max_kkt_violation = worst;
    }
    out.w = std::move(w);
    return out;
}

LinearModel fit_linear_impl(const MatrixXd& x, const MatrixXd& y, Penalty penalty, double lambda,
                            const FitConfig& config, LassoDiag* diag) {
    check_xy(x, y.rows());
    if (!y.allFinite()) throw Error("BadValue", "targets contain NaN or infinity");
    if (lambda < 0.0) throw Error("BadParams", "lambda must be non-negative");
    if (penalty == Penalty::None && lambda != 0.0)
        throw Error("BadParams", "lambda must be zero without a penalty");

    const Index n = x.rows(), p = x.cols(), m = y.cols();
    const RowVectorXd x_mean = x.colwise().mean();
    const RowVectorXd y_mean = y.colwise().mean();
    MatrixXd xc = x.rowwise() - x_mean;
    MatrixXd yc = y.rowwise() - y_mean;

    LinearModel model;
    model.penalty = penalty;
    model.lambda = lambda;
    if (penalty == Penalty::L1) {
        model.weights.resize(p, m);
        if (p <= kGramWidthLimit) {
            const MatrixXd gram = xc.transpose() * xc;
            for (Index k = 0; k < m; ++k) {
                LassoDiag* d = (diag && k == 0) ? diag : nullptr;
                const VectorXd corr = xc.transpose() * yc.col(k);
                auto res =
                    lasso_cd_gram(gram, corr, yc.col(k).squaredNorm(), n, lambda, config, d);
                if (d) {
                    d->sweeps = res.sweeps;
                    d->converged = res.converged;
                }
                model.weights.col(k) = res.w;
            }
        } else {
            const VectorXd col_sq = xc.colwise().squaredNorm();
            for (Index k = 0; k < m; ++k) {
                LassoDiag* d = (diag && k == 0) ? diag : nullptr;
                auto res = lasso_cd_residual(xc, yc.col(k), col_sq, lambda, config, d);
                if (d) {
                    d->sweeps = res.sweeps;
                    d->converged = res.converged;
                }
                model.weights.col(k) = res.w;
            }
        }
    } else {
        model.weights = solve_linear_system(xc, yc, penalty, lambda);
    }
    model.intercept = y_mean - x_mean * model.weights;
    return model;
}

nlohmann::ordered_json matrix_to_json(const MatrixXd& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

MatrixXd matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw Error("MalformedJson", "expected an array of rows");
    const std::size_t rows = j.size();
    if (rows == 0) return MatrixXd(0, 0);
    const std::size_t cols = j.at(0).size();
    MatrixXd m(static_cast<Index>(rows), static_cast<Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        const auto& row = j.at(i);
        if (!row.is_array() || row.size() != cols)
            throw Error("MalformedJson", "ragged matrix rows");
        for (std::size_t k = 0; k < cols; ++k)
            m(static_cast<Index>(i), static_cast<Index>(k)) = row.at(k).get<double>();
    }
    return m;
}

std::string penalty_name(Penalty p) {
    switch (p) {
        case Penalty::None: return "none";
        case Penalty::L2: return "l2";
        case Penalty::L1: return "l1";
    }
    throw Error("BadParams", "unknown penalty");
}

Penalty penalty_from_name(const std::string& s) {
    if (s == "none") return Penalty::None;
    if (s == "l2") return Penalty::L2;
    if (s == "l1") return Penalty::L1;
    throw Error("MalformedJson", "unknown penalty name: " + s);
}

}  // namespace

LinearModel fit_linear(const MatrixXd& x, const VectorXd& y, Penalty penalty, double lambda,
                       const FitConfig& config, LassoDiag* diag) {
    if (diag) *diag = LassoDiag{};
    return fit_linear_impl(x, y, penalty, lambda, config, diag);
}

LinearModel fit_linear_multi(const MatrixXd& x, const MatrixXd& y, Penalty penalty, double lambda,
                             const FitConfig& config) {
    if (y.cols() == 0) throw Error("BadShape", "fit requires at least one output column");
    return fit_linear_impl(x, y, penalty, lambda, config, nullptr);
}

MatrixXd predict_linear(const LinearModel& model, const MatrixXd& x) {
    if (x.cols() != model.weights.rows())
        throw Error("BadShape", "feature count does not match the fitted model");
    return (x * model.weights).rowwise() + model.intercept;
}

double lasso_deactivation_lambda(const MatrixXd& x, const VectorXd& y) {
    check_xy(x, y.rows());
    const RowVectorXd x_mean = x.colwise().mean();
    const MatrixXd xc = x.rowwise() - x_mean;
    const VectorXd yc = y.array() - y.mean();
    return (xc.transpose() * yc).cwiseAbs().maxCoeff() / static_cast<double>(x.rows());
}

KnnModel fit_knn(const MatrixXd& x, const MatrixXd& y, int k) {
    check_xy(x, y.rows());
    if (k < 1 || k > x.rows())
        throw Error("BadParams", "k must be in [1, n_rows]");
    return KnnModel{x, y, k};
}

MatrixXd predict_knn(const KnnModel& model, const MatrixXd& x) {
    if (x.cols() != model.x.cols())
        throw Error("BadShape", "feature count does not match the fitted model");
    const Index n_train = model.x.rows();
    const Index k = model.k;
    MatrixXd out(x.rows(), model.y.cols());
    std::vector<Index> order(static_cast<std::size_t>(n_train));
    VectorXd dist(n_train);
    for (Index i = 0; i < x.rows(); ++i) {
        dist = (model.x.rowwise() - x.row(i)).rowwise().squaredNorm();
        std::iota(order.begin(), order.end(), Index{0});
        // Ties on distance go to the lower training-row index; partial sort
        // with that order keeps predictions deterministic.
        std::partial_sort(order.begin(), order.begin() + k, order.end(),
                          [&dist](Index a, Index b) {
                              if (dist(a) != dist(b)) return dist(a) < dist(b);
                              return a < b;
                          });
        RowVectorXd acc = RowVectorXd::Zero(model.y.cols());
        for (Index j = 0; j < k; ++j) acc += model.y.row(order[static_cast<std::size_t>(j)]);
        out.row(i) = acc / static_cast<double>(k);
    }
    return out;
}

namespace {

struct NodeStats {
    double sum = 0.0, sum_sq = 0.0;
    Index count = 0;
    double sse() const {
        return count == 0 ? 0.0 : sum_sq - sum * sum / static_cast<double>(count);
    }
    double mean() const { return count == 0 ? 0.0 : sum / static_cast<double>(count); }
};

struct BuildFrame {
    int node = 0;
    Index begin = 0, end = 0;
    int depth = 0;
};

std::vector<EtNode> build_tree(const MatrixXd& x, const VectorXd& y, const EtParams& params,
                               int n_candidates, Rng& rng, std::vector<Index>& rows,
                               std::vector<int>& feature_pool) {
    const Index d = x.cols();
    std::vector<EtNode> nodes;
    nodes.emplace_back();
    std::vector<BuildFrame> stack{{0, 0, static_cast<Index>(rows.size()), 0}};
    while (!stack.empty()) {
        const BuildFrame fr = stack.back();
        stack.pop_back();
        NodeStats total;
        for (Index i = fr.begin; i < fr.end; ++i) {
            const double v = y(rows[static_cast<std::size_t>(i)]);
            total.sum += v;
            total.sum_sq += v * v;
            ++total.count;
        }
        auto make_leaf = [&] {
            nodes[static_cast<std::size_t>(fr.node)] = EtNode{-1, 0.0, -1, -1, total.mean()};
        };
        const Index n_node = fr.end - fr.begin;
        if (fr.depth >= params.max_depth || n_node < 2 * params.min_samples_leaf ||
            total.sse() <= 0.0) {
            make_leaf();
            continue;
        }

        // Draw the candidate feature subset (partial Fisher-Yates over a
        // fresh pool so consumption is a fixed function of the node).
        std::iota(feature_pool.begin(), feature_pool.end(), 0);
        const int n_cand = std::min<int>(n_candidates, static_cast<int>(d));
        for (int c = 0; c < n_cand; ++c) {
            const std::size_t pick =
                static_cast<std::size_t>(c) +
                static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(d - c)));
            std::swap(feature_pool[static_cast<std::size_t>(c)], feature_pool[pick]);
        }

        int best_feature = -1;
        double best_threshold = 0.0, best_score = std::numeric_limits<double>::infinity();
        for (int c = 0; c < n_cand; ++c) {
            const int f = feature_pool[static_cast<std::size_t>(c)];
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (Index i = fr.begin; i < fr.end; ++i) {
                const double v = x(rows[static_cast<std::size_t>(i)], f);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (!(lo < hi)) continue;  // constant feature here: no draw, no split
            const double threshold = lo + rng.next_double() * (hi - lo);
            if (!(threshold < hi)) continue;  // rounding pushed it onto the max
            NodeStats left, right;
            for (Index i = fr.begin; i < fr.end; ++i) {
                const Index r = rows[static_cast<std::size_t>(i)];
                const double v = y(r);
                if (x(r, f) <= threshold) {
                    left.sum += v;
                    left.sum_sq += v * v;
                    ++left.count;
                } else {
                    right.sum += v;
                    right.sum_sq += v * v;
                    ++right.count;
                }
            }
            if (left.count < params.min_samples_leaf || right.count < params.min_samples_leaf)
                continue;
            const double score = left.sse() + right.sse();
            if (score < best_score) {  // strict: ties keep the earliest candidate
                best_score = score;
                best_feature = f;
                best_threshold = threshold;
            }
        }
        if (best_feature < 0) {
            make_leaf();
            continue;
        }

        auto mid_it = std::partition(rows.begin() + fr.begin, rows.begin() + fr.end,
                                     [&](Index r) { return x(r, best_feature) <= best_threshold; });
        const Index mid = static_cast<Index>(mid_it - rows.begin());
        const int left_id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes.emplace_back();
        nodes[static_cast<std::size_t>(fr.node)] =
            EtNode{best_feature, best_threshold, left_id, left_id + 1, 0.0};
        // Right child first so the left subtree is processed next (stack
        // order); either order yields the same tree, this one keeps RNG
        // consumption in depth-first left-to-right order.
        stack.push_back({left_id + 1, mid, fr.end, fr.depth + 1});
        stack.push_back({left_id, fr.begin, mid, fr.depth + 1});
    }
    return nodes;
}

}  // namespace

ForestModel fit_forest(const MatrixXd& x, const VectorXd& y, const EtParams& params,
                       std::uint64_t seed) {
    check_xy(x, y.rows());
    if (!y.allFinite()) throw Error("BadValue", "targets contain NaN or infinity");
    if (params.n_trees < 1 || params.max_depth < 1 || params.min_samples_leaf < 1)
        throw Error("BadParams", "forest parameters must be positive");
    if (x.rows() < 2 * params.min_samples_leaf)
        throw Error("BadShape", "need at least 2*min_samples_leaf rows to grow a tree");

    const Index d = x.cols();
    int n_candidates = params.n_candidates;
    if (n_candidates <= 0)
        n_candidates = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(d)))));

    ForestModel model;
    model.params = params;
    model.seed = seed;
    model.n_features = static_cast<int>(d);
    model.trees.reserve(static_cast<std::size_t>(params.n_trees));
    std::vector<Index> rows(static_cast<std::size_t>(x.rows()));
    std::vector<int> feature_pool(static_cast<std::size_t>(d));
    for (int t = 0; t < params.n_trees; ++t) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(t)}));
        std::iota(rows.begin(), rows.end(), Index{0});
        model.trees.push_back(build_tree(x, y, params, n_candidates, rng, rows, feature_pool));
    }
    return model;
}

VectorXd predict_forest(const ForestModel& model, const MatrixXd& x) {
    if (x.cols() != model.n_features)
        throw Error("BadShape", "feature count does not match the fitted model");
    if (model.trees.empty()) throw Error("BadParams", "empty forest");
    VectorXd out = VectorXd::Zero(x.rows());
    for (const auto& tree : model.trees) {
        for (Index i = 0; i < x.rows(); ++i) {
            int node = 0;
            while (tree[static_cast<std::size_t>(node)].feature >= 0) {
                const EtNode& nd = tree[static_cast<std::size_t>(node)];
                node = x(i, nd.feature) <= nd.threshold ? nd.left : nd.right;
            }
            out(i) += tree[static_cast<std::size_t>(node)].value;
        }
    }
    return out / static_cast<double>(model.trees.size());
}

MatrixXd polynomial_features(const MatrixXd& x, int degree) {
    if (degree == 1) return x;
    if (degree != 2) throw Error("BadParams", "polynomial degree must be 1 or 2");
    const Index n = x.rows(), p = x.cols();
    const Index total = p + p + p * (p - 1) / 2;
    MatrixXd out(n, total);
    out.leftCols(p) = x;
    out.middleCols(p, p) = x.array().square();
    Index col = 2 * p;
    for (Index i = 0; i < p; ++i)
        for (Index j = i + 1; j < p; ++j)
            out.col(col++) = x.col(i).cwiseProduct(x.col(j));
    return out;
}

std::string linear_model_to_json(const LinearModel& model) {
    nlohmann::ordered_json j;
    j["kind"] = "linear";
    j["penalty"] = penalty_name(model.penalty);
    j["lambda"] = model.lambda;
    j["weights"] = matrix_to_json(model.weights);
    nlohmann::ordered_json b = nlohmann::ordered_json::array();
    for (Index k = 0; k < model.intercept.size(); ++k) b.push_back(model.intercept(k));
    j["intercept"] = std::move(b);
    return j.dump(2) + "\n";
}

LinearModel linear_model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("MalformedJson", e.what());
    }
    try {
        if (j.at("kind").get<std::string>() != "linear")
            throw Error("MalformedJson", "not a linear model");
        LinearModel model;
        model.penalty = penalty_from_name(j.at("penalty").get<std::string>());
        model.lambda = j.at("lambda").get<double>();
        model.weights = matrix_from_json(j.at("weights"));
        const auto& b = j.at("intercept");
        model.intercept.resize(static_cast<Index>(b.size()));
        for (std::size_t k = 0; k < b.size(); ++k)
            model.intercept(static_cast<Index>(k)) = b.at(k).get<double>();
        if (model.intercept.size() != model.weights.cols())
            throw Error("MalformedJson", "intercept width does not match weights");
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw Error("MalformedJson", e.what());
    }
}

std::string knn_model_to_json(const KnnModel& model) {
    nlohmann::ordered_json j;
    j["kind"] = "knn";
    j["k"] = model.k;
    j["x"] = matrix_to_json(model.x);
    j["y"] = matrix_to_json(model.y);
    return j.dump(2) + "\n";
}

KnnModel knn_model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("MalformedJson", e.what());
    }
    try {
        if (j.at("kind").get<std::string>() != "knn")
            throw Error("MalformedJson", "not a knn model");
        KnnModel model;
        model.k = j.at("k").get<int>();
        model.x = matrix_from_json(j.at("x"));
        model.y = matrix_from_json(j.at("y"));
        if (model.x.rows() != model.y.rows())
            throw Error("MalformedJson", "x and y row counts differ");
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw Error("MalformedJson", e.what());
    }
}

std::string forest_model_to_json(const ForestModel& model) {
    nlohmann::ordered_json j;
    j["kind"] = "forest";
    j["n_trees"] = model.params.n_trees;
    j["max_depth"] = model.params.max_depth;
    j["min_samples_leaf"] = model.params.min_samples_leaf;
    j["n_candidates"] = model.params.n_candidates;
    j["seed"] = model.seed;
    j["n_features"] = model.n_features;
    nlohmann::ordered_json trees = nlohmann::ordered_json::array();
    for (const auto& tree : model.trees) {
        nlohmann::ordered_json tj = nlohmann::ordered_json::array();
        for (const auto& nd : tree)
            tj.push_back({nd.feature, nd.threshold, nd.left, nd.right, nd.value});
        trees.push_back(std::move(tj));
    }
    j["trees"] = std::move(trees);
    return j.dump() + "\n";  // forests are large; keep them on one line
}

ForestModel forest_model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("MalformedJson", e.what());
    }
    try {
        if (j.at("kind").get<std::string>() != "forest")
            throw Error("MalformedJson", "not a forest model");
        ForestModel model;
        model.params.n_trees = j.at("n_trees").get<int>();
        model.params.max_depth = j.at("max_depth").get<int>();
        model.params.min_samples_leaf = j.at("min_samples_leaf").get<int>();
        model.params.n_candidates = j.at("n_candidates").get<int>();
        model.seed = j.at("seed").get<std::uint64_t>();
        model.n_features = j.at("n_features").get<int>();
        for (const auto& tj : j.at("trees")) {
            std::vector<EtNode> tree;
            tree.reserve(tj.size());
            for (const auto& nj : tj) {
                if (!nj.is_array() || nj.size() != 5)
                    throw Error("MalformedJson", "malformed tree node");
                tree.push_back(EtNode{nj.at(0).get<int>(), nj.at(1).get<double>(),
                                      nj.at(2).get<int>(), nj.at(3).get<int>(),
                                      nj.at(4).get<double>()});
            }
            model.trees.push_back(std::move(tree));
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw Error("MalformedJson", e.what());
    }
}

}  // namespace faultloc
