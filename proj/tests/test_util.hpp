#pragma once

#include <Eigen/Dense>
#include <cstring>

// Bitwise matrix equality: dimensions plus the raw double payload, so NaN
// markers compare equal to themselves and observed-cell preservation can be
// asserted exactly.
inline bool bit_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    if (a.size() == 0) return true;
    return std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) ==
           0;
}

inline bool bit_equal(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
    if (a.size() != b.size()) return false;
    if (a.size() == 0) return true;
    return std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) ==
           0;
}
