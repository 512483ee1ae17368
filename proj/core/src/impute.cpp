#include "faultloc/impute.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

#include <nlohmann/json.hpp>

#include "faultloc/csv.hpp"
#include "faultloc/error.hpp"
#include "faultloc/rng.hpp"

namespace faultloc {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Rows-of-interest gather of every column except `skip`.
MatrixXd gather_design(const MatrixXd& x, const std::vector<Index>& rows, Index skip) {
    MatrixXd out(static_cast<Index>(rows.size()), x.cols() - 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        Index c = 0;
        for (Index j = 0; j < x.cols(); ++j) {
            if (j == skip) continue;
            out(static_cast<Index>(i), c++) = x(rows[i], j);
        }
    }
    return out;
}

VectorXd fit_predict(const MatrixXd& xtr, const VectorXd& ytr, const MatrixXd& xte,
                     const EstimatorSpec& spec, std::uint64_t forest_seed) {
    switch (spec.kind) {
        case EstimatorSpec::Kind::Ols:
            return predict_linear(fit_linear(xtr, ytr, Penalty::None, 0.0), xte).col(0);
        case EstimatorSpec::Kind::Ridge:
            return predict_linear(fit_linear(xtr, ytr, Penalty::L2, spec.lambda), xte).col(0);
        case EstimatorSpec::Kind::Lasso:
            return predict_linear(fit_linear(xtr, ytr, Penalty::L1, spec.lambda), xte).col(0);
        case EstimatorSpec::Kind::Knn:
            return predict_knn(fit_knn(xtr, ytr, spec.k), xte).col(0);
        case EstimatorSpec::Kind::ExtraTrees:
            return predict_forest(fit_forest(xtr, ytr, spec.et, forest_seed), xte);
    }
    throw Error("BadParams", "unknown estimator kind");
}

}  // namespace

std::string estimator_name(const EstimatorSpec& spec) {
    switch (spec.kind) {
        case EstimatorSpec::Kind::Ols: return "ols";
        case EstimatorSpec::Kind::Ridge: return "ridge(" + format_double(spec.lambda) + ")";
        case EstimatorSpec::Kind::Lasso: return "lasso(" + format_double(spec.lambda) + ")";
        case EstimatorSpec::Kind::Knn: return "knn(" + std::to_string(spec.k) + ")";
        case EstimatorSpec::Kind::ExtraTrees: return "extratrees";
    }
    throw Error("BadParams", "unknown estimator kind");
}

EstimatorSpec estimator_from_name(const std::string& text) {
    std::string kind = text;
    std::string arg;
    const auto open = text.find('(');
    if (open != std::string::npos) {
        if (text.back() != ')')
            throw Error("BadParams", "malformed estimator name: " + text);
        kind = text.substr(0, open);
        arg = text.substr(open + 1, text.size() - open - 2);
    }
    auto number = [&](double fallback) {
        if (arg.empty()) return fallback;
        try {
            std::size_t used = 0;
            const double v = std::stod(arg, &used);
            if (used != arg.size()) throw std::invalid_argument(arg);
            return v;
        } catch (const std::exception&) {
            throw Error("BadParams", "bad estimator argument: " + text);
        }
    };
    EstimatorSpec spec;
    if (kind == "ols") {
        spec.kind = EstimatorSpec::Kind::Ols;
    } else if (kind == "ridge") {
        spec.kind = EstimatorSpec::Kind::Ridge;
        spec.lambda = number(0.1);
    } else if (kind == "lasso") {
        spec.kind = EstimatorSpec::Kind::Lasso;
        spec.lambda = number(1e-4);
    } else if (kind == "knn") {
        spec.kind = EstimatorSpec::Kind::Knn;
        spec.k = static_cast<int>(number(5));
        if (spec.k < 1) throw Error("BadParams", "knn needs k >= 1");
    } else if (kind == "extratrees") {
        spec.kind = EstimatorSpec::Kind::ExtraTrees;
    } else {
        throw Error("BadParams", "unknown estimator: " + text);
    }
    return spec;
}

ImputationResult impute(const Eigen::MatrixXd& masked, const ImputerConfig& config) {
    if (config.tolerance <= 0.0) throw Error("BadParams", "tolerance must be positive");
    if (config.max_rounds < 1) throw Error("BadParams", "max_rounds must be >= 1");
    if (masked.rows() < 2 || masked.cols() < 2)
        throw Error("BadShape", "imputation needs at least 2 rows and 2 columns");

    const Index n = masked.rows(), p = masked.cols();
    std::vector<std::vector<Index>> missing_rows(static_cast<std::size_t>(p));
    std::vector<std::vector<Index>> observed_rows(static_cast<std::size_t>(p));
    double observed_sum = 0.0;
    Index observed_count = 0;
    for (Index j = 0; j < p; ++j) {
        for (Index i = 0; i < n; ++i) {
            if (std::isnan(masked(i, j))) {
                missing_rows[static_cast<std::size_t>(j)].push_back(i);
            } else {
                observed_rows[static_cast<std::size_t>(j)].push_back(i);
                observed_sum += masked(i, j);
                ++observed_count;
            }
        }
    }
    if (observed_count == 0)
        throw Error("NoObservedCells", "cannot impute a matrix with no observed cells");

    ImputationResult result;
    result.completed = masked;
    const bool any_missing =
        std::any_of(missing_rows.begin(), missing_rows.end(), [](const auto& v) { return !v.empty(); });
    if (!any_missing) {
        result.converged = true;
        return result;
    }

    MatrixXd& x = result.completed;
    const double global_mean = observed_sum / static_cast<double>(observed_count);
    for (Index j = 0; j < p; ++j) {
        const auto& mis = missing_rows[static_cast<std::size_t>(j)];
        if (mis.empty()) continue;
        double fill = 0.0;
        if (config.initial_fill == InitialFill::ColumnMean) {
            const auto& obs = observed_rows[static_cast<std::size_t>(j)];
            if (obs.empty()) {
                fill = global_mean;
            } else {
                double s = 0.0;
                for (Index i : obs) s += masked(i, j);
                fill = s / static_cast<double>(obs.size());
            }
        }
        for (Index i : mis) x(i, j) = fill;
    }

    // Visit order: least-missing columns first (their fits see the most real
    // data), ties by column index.
    std::vector<Index> incomplete;
    for (Index j = 0; j < p; ++j)
        if (!missing_rows[static_cast<std::size_t>(j)].empty()) incomplete.push_back(j);
    std::sort(incomplete.begin(), incomplete.end(), [&](Index a, Index b) {
        const auto na = missing_rows[static_cast<std::size_t>(a)].size();
        const auto nb = missing_rows[static_cast<std::size_t>(b)].size();
        if (na != nb) return na < nb;
        return a < b;
    });

    for (int round = 0; round < config.max_rounds; ++round) {
        double max_delta = 0.0;
        for (Index j : incomplete) {
            const auto& obs = observed_rows[static_cast<std::size_t>(j)];
            const auto& mis = missing_rows[static_cast<std::size_t>(j)];
            if (obs.empty()) continue;  // fully-missing column keeps its fill
            const MatrixXd xtr = gather_design(x, obs, j);
            const MatrixXd xte = gather_design(x, mis, j);
            VectorXd ytr(static_cast<Index>(obs.size()));
            for (std::size_t i = 0; i < obs.size(); ++i)
                ytr(static_cast<Index>(i)) = x(obs[i], j);
            VectorXd pred;
            try {
                pred = fit_predict(xtr, ytr, xte, config.estimator,
                                   derive_seed(config.seed,
                                               {static_cast<std::uint64_t>(round),
                                                static_cast<std::uint64_t>(j)}));
            } catch (const Error& e) {
                throw Error(e.kind(),
                            "imputing column " + std::to_string(j) + ": " + e.what());
            }
            for (std::size_t i = 0; i < mis.size(); ++i) {
                const double v = std::clamp(pred(static_cast<Index>(i)), 0.0, 1.0);
                max_delta = std::max(max_delta, std::abs(v - x(mis[i], j)));
                x(mis[i], j) = v;
            }
        }
        result.round_deltas.push_back(max_delta);
        result.rounds_used = round + 1;
        if (max_delta < config.tolerance) {
            result.converged = true;
            break;
        }
    }
    return result;
}

ImputationResult mean_fill(const Eigen::MatrixXd& masked) {
    if (masked.size() == 0) throw Error("BadShape", "empty matrix");
    const Index n = masked.rows(), p = masked.cols();
    double observed_sum = 0.0;
    Index observed_count = 0;
    for (Index j = 0; j < p; ++j)
        for (Index i = 0; i < n; ++i)
            if (!std::isnan(masked(i, j))) {
                observed_sum += masked(i, j);
                ++observed_count;
            }
    if (observed_count == 0)
        throw Error("NoObservedCells", "cannot fill a matrix with no observed cells");

    ImputationResult result;
    result.completed = masked;
    result.converged = true;
    const double global_mean = observed_sum / static_cast<double>(observed_count);
    bool any_missing = false;
    for (Index j = 0; j < p; ++j) {
        double sum = 0.0;
        Index count = 0;
        for (Index i = 0; i < n; ++i)
            if (!std::isnan(masked(i, j))) {
                sum += masked(i, j);
                ++count;
            }
        const double fill = count > 0 ? sum / static_cast<double>(count) : global_mean;
        for (Index i = 0; i < n; ++i)
            if (std::isnan(masked(i, j))) {
                result.completed(i, j) = fill;
                any_missing = true;
            }
    }
    result.rounds_used = any_missing ? 1 : 0;
    return result;
}

double imputation_rmse(const Eigen::MatrixXd& original, const Eigen::MatrixXd& completed,
                       const Mask& mask) {
    if (original.rows() != completed.rows() || original.cols() != completed.cols())
        throw Error("ShapeMismatch", "original and completed shapes differ");
    if (original.rows() != static_cast<Index>(mask.rows) ||
        original.cols() != static_cast<Index>(mask.cols))
        throw Error("ShapeMismatch", "mask shape does not match the matrices");
    double sum_sq = 0.0;
    std::size_t count = 0;
    for (int i = 0; i < mask.rows; ++i)
        for (int j = 0; j < mask.cols; ++j)
            if (!mask.at(i, j)) {
                const double d = original(i, j) - completed(i, j);
                sum_sq += d * d;
                ++count;
            }
    if (count == 0)
        throw Error("NoMissingCells", "imputation RMSE is undefined without missing cells");
    return std::sqrt(sum_sq / static_cast<double>(count));
}

std::string imputation_report_json(const ImputationResult& result) {
    nlohmann::ordered_json j;
    j["rounds_used"] = result.rounds_used;
    j["converged"] = result.converged;
    j["round_deltas"] = result.round_deltas;
    return j.dump(2) + "\n";
}

}  // namespace faultloc
