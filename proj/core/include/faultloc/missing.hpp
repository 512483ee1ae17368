#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace faultloc {

enum class MaskMode { McarCell, ColumnDrop };

// Boolean observation pattern. true = observed. Sampling never reads the
// data it will be applied to (MCAR by construction).
struct Mask {
    int rows = 0;
    int cols = 0;
    MaskMode mode = MaskMode::McarCell;
    double rate = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::uint8_t> observed;  // row-major rows*cols

    bool at(int r, int c) const { return observed[static_cast<std::size_t>(r) * cols + c] != 0; }
    std::size_t missing_count() const;
};

// MCAR-cell: each cell independently missing with probability rate.
// ColumnDrop: each column entirely missing with probability rate; if every
// column would be lost, the draw is retried with a derived seed.
Mask sample_mask(int n_samples, int n_features, double rate, MaskMode mode, std::uint64_t seed);

// Missing cells become NaN; observed cells are copied bit-exactly.
Eigen::MatrixXd apply_mask(const Eigen::MatrixXd& x, const Mask& mask);

// 0/1 audit CSV (no header), one row per sample.
std::string mask_to_csv(const Mask& mask);

}  // namespace faultloc
