#include "faultloc/missing.hpp"

#include <limits>

#include "faultloc/error.hpp"
#include "faultloc/rng.hpp"

namespace faultloc {

std::size_t Mask::missing_count() const {
    std::size_t n = 0;
    for (std::uint8_t o : observed) n += o ? 0 : 1;
    return n;
}

Mask sample_mask(int n_samples, int n_features, double rate, MaskMode mode, std::uint64_t seed) {
    if (n_samples <= 0 || n_features <= 0) throw Error("BadParams", "zero-sized matrix");
    if (!(rate >= 0.0 && rate < 1.0)) {
        throw Error("BadParams", "missing rate must lie in [0,1)");
    }

    Mask m;
    m.rows = n_samples;
    m.cols = n_features;
    m.mode = mode;
    m.rate = rate;
    m.seed = seed;
    m.observed.assign(static_cast<std::size_t>(n_samples) * n_features, 1);
    if (rate == 0.0) return m;

    if (mode == MaskMode::McarCell) {
        Rng rng(seed);
        for (auto& cell : m.observed) cell = rng.bernoulli(rate) ? 0 : 1;
        return m;
    }

    // ColumnDrop: retry until at least one column survives
    for (std::uint64_t attempt = 0;; ++attempt) {
        Rng rng(derive_seed(seed, {attempt}));
        std::vector<std::uint8_t> col_observed(static_cast<std::size_t>(n_features));
        bool any = false;
        for (int c = 0; c < n_features; ++c) {
            col_observed[static_cast<std::size_t>(c)] = rng.bernoulli(rate) ? 0 : 1;
            any = any || col_observed[static_cast<std::size_t>(c)];
        }
        if (!any) continue;
        for (int r = 0; r < n_samples; ++r) {
            for (int c = 0; c < n_features; ++c) {
                m.observed[static_cast<std::size_t>(r) * n_features + c] =
                    col_observed[static_cast<std::size_t>(c)];
            }
        }
        return m;
    }
}

Eigen::MatrixXd apply_mask(const Eigen::MatrixXd& x, const Mask& mask) {
    if (x.rows() != mask.rows || x.cols() != mask.cols) {
        throw Error("ShapeMismatch", "mask does not match matrix shape");
    }
    Eigen::MatrixXd out = x;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int r = 0; r < mask.rows; ++r) {
        for (int c = 0; c < mask.cols; ++c) {
            if (!mask.at(r, c)) out(r, c) = nan;
        }
    }
    return out;
}

std::string mask_to_csv(const Mask& mask) {
    std::string out;
    out.reserve(static_cast<std::size_t>(mask.rows) * (static_cast<std::size_t>(mask.cols) * 2));
    for (int r = 0; r < mask.rows; ++r) {
        for (int c = 0; c < mask.cols; ++c) {
            if (c) out += ',';
            out += mask.at(r, c) ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

}  // namespace faultloc
