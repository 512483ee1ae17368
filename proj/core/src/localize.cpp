#include "faultloc/localize.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "faultloc/csv.hpp"
#include "faultloc/error.hpp"
#include "faultloc/rng.hpp"

namespace faultloc {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

std::string kind_name(EstimatorSpec::Kind kind) {
    switch (kind) {
        case EstimatorSpec::Kind::Ols: return "ols";
        case EstimatorSpec::Kind::Ridge: return "ridge";
        case EstimatorSpec::Kind::Lasso: return "lasso";
        case EstimatorSpec::Kind::Knn: return "knn";
        case EstimatorSpec::Kind::ExtraTrees: return "extratrees";
    }
    throw Error("BadParams", "unknown estimator kind");
}

EstimatorSpec::Kind kind_from_name(const std::string& s) {
    if (s == "ols") return EstimatorSpec::Kind::Ols;
    if (s == "ridge") return EstimatorSpec::Kind::Ridge;
    if (s == "lasso") return EstimatorSpec::Kind::Lasso;
    if (s == "knn") return EstimatorSpec::Kind::Knn;
    if (s == "extratrees") return EstimatorSpec::Kind::ExtraTrees;
    throw Error("MalformedJson", "unknown estimator kind: " + s);
}

}  // namespace

Localizer train_localizer(const MatrixXd& x, const MatrixXd& y, const PredictorSpec& spec,
                          int degree, std::uint64_t seed, std::vector<std::string> labels) {
    if (!x.allFinite())
        throw Error("MissingMarkers", "training features contain missing markers; impute first");
    if (x.rows() != y.rows()) throw Error("BadShape", "X and Y row counts differ");
    if (y.cols() < 1) throw Error("BadShape", "Y needs at least one component column");
    if (!labels.empty() && static_cast<Index>(labels.size()) != y.cols())
        throw Error("BadShape", "label count does not match Y columns");

    Localizer loc;
    loc.spec = spec;
    loc.degree = degree;
    loc.n_raw_features = static_cast<int>(x.cols());
    if (labels.empty()) {
        for (Index c = 0; c < y.cols(); ++c) loc.components.push_back("c" + std::to_string(c));
    } else {
        loc.components = std::move(labels);
    }

    const MatrixXd xf = polynomial_features(x, degree);
    switch (spec.kind) {
        case EstimatorSpec::Kind::Ols:
            loc.linear = fit_linear_multi(xf, y, Penalty::None, 0.0);
            break;
        case EstimatorSpec::Kind::Ridge:
            loc.linear = fit_linear_multi(xf, y, Penalty::L2, spec.lambda);
            break;
        case EstimatorSpec::Kind::Lasso:
            loc.linear = fit_linear_multi(xf, y, Penalty::L1, spec.lambda);
            break;
        case EstimatorSpec::Kind::Knn:
            loc.knn = fit_knn(xf, y, spec.k);
            break;
        case EstimatorSpec::Kind::ExtraTrees:
            loc.forests.reserve(static_cast<std::size_t>(y.cols()));
            for (Index c = 0; c < y.cols(); ++c)
                loc.forests.push_back(fit_forest(xf, y.col(c), spec.et,
                                                 derive_seed(seed, {static_cast<std::uint64_t>(c)})));
            break;
    }
    return loc;
}

MatrixXd predict_failures(const Localizer& localizer, const MatrixXd& x) {
    if (x.cols() != localizer.n_raw_features)
        throw Error("BadShape", "feature count does not match the localizer");
    if (!x.allFinite())
        throw Error("MissingMarkers", "prediction features contain missing markers");
    const MatrixXd xf = polynomial_features(x, localizer.degree);
    switch (localizer.spec.kind) {
        case EstimatorSpec::Kind::Ols:
        case EstimatorSpec::Kind::Ridge:
        case EstimatorSpec::Kind::Lasso:
            return predict_linear(localizer.linear, xf);
        case EstimatorSpec::Kind::Knn:
            return predict_knn(localizer.knn, xf);
        case EstimatorSpec::Kind::ExtraTrees: {
            MatrixXd out(x.rows(), static_cast<Index>(localizer.forests.size()));
            for (std::size_t c = 0; c < localizer.forests.size(); ++c)
                out.col(static_cast<Index>(c)) = predict_forest(localizer.forests[c], xf);
            return out;
        }
    }
    throw Error("BadParams", "unknown estimator kind");
}

VectorXd predict_failures_row(const Localizer& localizer, const RowVectorXd& x) {
    return predict_failures(localizer, MatrixXd(x)).row(0);
}

std::vector<int> top_k(const VectorXd& scores, int k) {
    const int n = static_cast<int>(scores.size());
    if (k < 1 || k > n) throw Error("BadParams", "k must be in [1, n_components]");
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&scores](int a, int b) {
        if (scores(a) != scores(b)) return scores(a) > scores(b);
        return a < b;
    });
    order.resize(static_cast<std::size_t>(k));
    return order;
}

double top_k_accuracy(const MatrixXd& predicted, const std::vector<int>& truth, int k) {
    if (predicted.rows() == 0) throw Error("BadShape", "no rankings to score");
    if (static_cast<std::size_t>(predicted.rows()) != truth.size())
        throw Error("BadShape", "ranking and label counts differ");
    const int n_comp = static_cast<int>(predicted.cols());
    if (k < 1 || k > n_comp) throw Error("BadParams", "k must be in [1, n_components]");
    Index hits = 0;
    for (Index i = 0; i < predicted.rows(); ++i) {
        const int t = truth[static_cast<std::size_t>(i)];
        if (t < 0 || t >= n_comp) throw Error("BadParams", "label out of component range");
        // Rank of the true component under the descending/ascending-index
        // order: strictly better scores, plus equal scores at lower index.
        const double st = predicted(i, t);
        int rank = 0;
        for (int j = 0; j < n_comp; ++j) {
            const double sj = predicted(i, j);
            if (sj > st || (sj == st && j < t)) ++rank;
        }
        if (rank < k) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(predicted.rows());
}

double score_r2(const MatrixXd& predicted, const MatrixXd& truth) {
    if (predicted.rows() != truth.rows() || predicted.cols() != truth.cols())
        throw Error("ShapeMismatch", "prediction and truth shapes differ");
    if (truth.size() == 0) throw Error("BadShape", "empty matrices");
    const double mean = truth.mean();
    const double ss_tot = (truth.array() - mean).square().sum();
    if (ss_tot == 0.0)
        throw Error("ZeroVariance", "R^2 is undefined for a constant truth matrix");
    const double ss_res = (truth - predicted).array().square().sum();
    return 1.0 - ss_res / ss_tot;
}

double score_mse(const MatrixXd& predicted, const MatrixXd& truth) {
    if (predicted.rows() != truth.rows() || predicted.cols() != truth.cols())
        throw Error("ShapeMismatch", "prediction and truth shapes differ");
    if (truth.size() == 0) throw Error("BadShape", "empty matrices");
    return (truth - predicted).array().square().mean();
}

std::string localizer_to_json(const Localizer& localizer) {
    nlohmann::ordered_json j;
    j["kind"] = "localizer";
    j["estimator"] = {{"kind", kind_name(localizer.spec.kind)},
                      {"lambda", localizer.spec.lambda},
                      {"k", localizer.spec.k},
                      {"n_trees", localizer.spec.et.n_trees},
                      {"max_depth", localizer.spec.et.max_depth},
                      {"min_samples_leaf", localizer.spec.et.min_samples_leaf},
                      {"n_candidates", localizer.spec.et.n_candidates}};
    j["degree"] = localizer.degree;
    j["n_raw_features"] = localizer.n_raw_features;
    j["components"] = localizer.components;
    switch (localizer.spec.kind) {
        case EstimatorSpec::Kind::Ols:
        case EstimatorSpec::Kind::Ridge:
        case EstimatorSpec::Kind::Lasso:
            j["model"] = nlohmann::ordered_json::parse(linear_model_to_json(localizer.linear));
            break;
        case EstimatorSpec::Kind::Knn:
            j["model"] = nlohmann::ordered_json::parse(knn_model_to_json(localizer.knn));
            break;
        case EstimatorSpec::Kind::ExtraTrees: {
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (const auto& f : localizer.forests)
                arr.push_back(nlohmann::ordered_json::parse(forest_model_to_json(f)));
            j["model"] = std::move(arr);
            break;
        }
    }
    return j.dump() + "\n";
}

Localizer localizer_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("MalformedJson", e.what());
    }
    try {
        if (j.at("kind").get<std::string>() != "localizer")
            throw Error("MalformedJson", "not a localizer");
        Localizer loc;
        const auto& e = j.at("estimator");
        loc.spec.kind = kind_from_name(e.at("kind").get<std::string>());
        loc.spec.lambda = e.at("lambda").get<double>();
        loc.spec.k = e.at("k").get<int>();
        loc.spec.et.n_trees = e.at("n_trees").get<int>();
        loc.spec.et.max_depth = e.at("max_depth").get<int>();
        loc.spec.et.min_samples_leaf = e.at("min_samples_leaf").get<int>();
        loc.spec.et.n_candidates = e.at("n_candidates").get<int>();
        loc.degree = j.at("degree").get<int>();
        loc.n_raw_features = j.at("n_raw_features").get<int>();
        loc.components = j.at("components").get<std::vector<std::string>>();
        const auto& model = j.at("model");
        switch (loc.spec.kind) {
            case EstimatorSpec::Kind::Ols:
            case EstimatorSpec::Kind::Ridge:
            case EstimatorSpec::Kind::Lasso:
                loc.linear = linear_model_from_json(model.dump());
                break;
            case EstimatorSpec::Kind::Knn:
                loc.knn = knn_model_from_json(model.dump());
                break;
            case EstimatorSpec::Kind::ExtraTrees:
                for (const auto& f : model)
                    loc.forests.push_back(forest_model_from_json(f.dump()));
                break;
        }
        return loc;
    } catch (const nlohmann::json::exception& e) {
        throw Error("MalformedJson", e.what());
    }
}

std::string rankings_to_csv(const MatrixXd& predicted, const std::vector<std::string>& components,
                            int k) {
    if (static_cast<Index>(components.size()) != predicted.cols())
        throw Error("BadShape", "component label count does not match predictions");
    const int depth = (k <= 0) ? static_cast<int>(predicted.cols())
                               : std::min<int>(k, static_cast<int>(predicted.cols()));
    std::ostringstream out;
    out << "sample,rank,component,score\n";
    for (Index i = 0; i < predicted.rows(); ++i) {
        const VectorXd row = predicted.row(i);
        const auto ranked = top_k(row, depth);
        for (int r = 0; r < depth; ++r) {
            const int c = ranked[static_cast<std::size_t>(r)];
            out << i << ',' << (r + 1) << ',' << components[static_cast<std::size_t>(c)] << ','
                << format_double(row(c)) << '\n';
        }
    }
    return out.str();
}

}  // namespace faultloc
