#include "eva/linalg.hpp"

#include <cmath>
#include <numeric>
#include <vector>

namespace eva {

std::pair<Matrix, Matrix> full_rank_decompose(const Matrix& m, double tol) {
    const std::size_t s = m.rows(), t = m.cols();
    const double threshold = tol * m.max_abs();
    if (m.max_abs() == 0.0) {
        throw DegenerateInputError("full_rank_decompose: matrix is zero");
    }

    Matrix u = m;
    Matrix lfac(s, std::min(s, t));
    std::vector<std::size_t> origin(s);  // origin[i] = source row of current row i
    std::iota(origin.begin(), origin.end(), 0);

    std::size_t rank = 0;
    for (std::size_t col = 0; col < t && rank < s; ++col) {
        std::size_t piv = rank;
        for (std::size_t i = rank + 1; i < s; ++i) {
            if (std::fabs(u(i, col)) > std::fabs(u(piv, col))) piv = i;
        }
        if (std::fabs(u(piv, col)) <= threshold) {
            for (std::size_t i = rank; i < s; ++i) u(i, col) = 0.0;
            continue;
        }
        if (piv != rank) {
            for (std::size_t j = 0; j < t; ++j) std::swap(u(piv, j), u(rank, j));
            for (std::size_t j = 0; j < rank; ++j) std::swap(lfac(piv, j), lfac(rank, j));
            std::swap(origin[piv], origin[rank]);
        }
        lfac(rank, rank) = 1.0;
        for (std::size_t i = rank + 1; i < s; ++i) {
            const double f = u(i, col) / u(rank, col);
            lfac(i, rank) = f;
            u(i, col) = 0.0;
            for (std::size_t j = col + 1; j < t; ++j) u(i, j) -= f * u(rank, j);
        }
        ++rank;
    }

    if (rank == 0) {
        throw DegenerateInputError("full_rank_decompose: matrix is numerically zero");
    }

    // P*m = L*U, so row origin[i] of m equals row i of L*U.
    Matrix b1(s, rank);
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < rank; ++j) b1(origin[i], j) = lfac(i, j);
    }
    Matrix b2(rank, t);
    for (std::size_t i = 0; i < rank; ++i) {
        for (std::size_t j = 0; j < t; ++j) b2(i, j) = u(i, j);
    }
    return {b1, b2};
}

Matrix invert(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw ShapeError("invert: matrix must be square");
    }
    const std::size_t n = m.rows();
    const double threshold = 1e-12 * m.max_abs();

    Matrix a = m;
    Matrix inv = Matrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i) {
            if (std::fabs(a(i, col)) > std::fabs(a(piv, col))) piv = i;
        }
        if (std::fabs(a(piv, col)) <= threshold) {
            throw SingularMatrixError("invert: matrix is numerically singular");
        }
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        }
        const double d = 1.0 / a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) *= d;
            inv(col, j) *= d;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col) continue;
            const double f = a(i, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

Matrix qr_orthogonal(const Matrix& g) {
    if (g.rows() != g.cols()) {
        throw ShapeError("qr_orthogonal: matrix must be square");
    }
    const std::size_t n = g.rows();
    Matrix r = g;
    Matrix q = Matrix::identity(n);
    std::vector<double> v(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < n; ++i) norm += r(i, k) * r(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        const double alpha = r(k, k) >= 0.0 ? -norm : norm;
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < n; ++i) {
            v[i] = r(i, k) - (i == k ? alpha : 0.0);
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 == 0.0) continue;
        const double beta = 2.0 / vnorm2;
        // r <- (I - beta v v^T) r ; q <- (I - beta v v^T) q
        for (std::size_t j = k; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < n; ++i) dot += v[i] * r(i, j);
            dot *= beta;
            for (std::size_t i = k; i < n; ++i) r(i, j) -= dot * v[i];
        }
        for (std::size_t j = 0; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < n; ++i) dot += v[i] * q(i, j);
            dot *= beta;
            for (std::size_t i = k; i < n; ++i) q(i, j) -= dot * v[i];
        }
    }
    // Accumulated reflections give Q^T; Q = (that)^T.
    return q.transpose();
}

}  // namespace eva
