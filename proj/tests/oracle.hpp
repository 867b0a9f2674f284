#pragma once

// Test-only reference computations. Everything here goes through Eigen so
// the checks stay independent of the library's own kernels.

#include <Eigen/Dense>

#include "eva/matrix.hpp"

namespace oracle {

inline Eigen::MatrixXd to_eigen(const eva::Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    }
    return e;
}

inline eva::Matrix from_eigen(const Eigen::MatrixXd& e) {
    eva::Matrix m(e.rows(), e.cols());
    for (Eigen::Index i = 0; i < e.rows(); ++i) {
        for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
    }
    return m;
}

inline eva::Matrix product(const eva::Matrix& a, const eva::Matrix& b) {
    return from_eigen(to_eigen(a) * to_eigen(b));
}

inline eva::Matrix product(const eva::Matrix& a, const eva::Matrix& b, const eva::Matrix& c) {
    return from_eigen(to_eigen(a) * to_eigen(b) * to_eigen(c));
}

inline eva::Matrix inverse(const eva::Matrix& m) {
    return from_eigen(to_eigen(m).inverse());
}

inline Eigen::VectorXd singular_values(const eva::Matrix& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
    return svd.singularValues();
}

/// Numerical rank at relative threshold tol * sigma_max.
inline std::size_t svd_rank(const eva::Matrix& m, double tol = 1e-8) {
    const auto sv = singular_values(m);
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > tol * sv(0)) ++r;
    }
    return r;
}

/// 2-norm condition number sigma_max / sigma_min.
inline double condition(const eva::Matrix& m) {
    const auto sv = singular_values(m);
    return sv(0) / sv(sv.size() - 1);
}

/// Least-squares solution of X b = y via column-pivoted QR.
inline eva::Matrix least_squares(const eva::Matrix& x, const eva::Matrix& y) {
    return from_eigen(to_eigen(x).colPivHouseholderQr().solve(to_eigen(y)));
}

}  // namespace oracle
