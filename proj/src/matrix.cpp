#include "eva/matrix.hpp"

#include <cmath>
#include <cstring>
#include <utility>

namespace eva {

namespace {

void check_finite(const std::vector<double>& data) {
    for (double x : data) {
        if (!std::isfinite(x)) {
            throw ShapeError("matrix element is not finite");
        }
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) {
        throw ShapeError("matrix dimensions must be positive");
    }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0) {
        throw ShapeError("matrix dimensions must be positive");
    }
    if (data_.size() != rows * cols) {
        throw ShapeError("data length does not match rows*cols");
    }
    check_finite(data_);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    if (rows_ == 0 || cols_ == 0) {
        throw ShapeError("matrix dimensions must be positive");
    }
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
        if (row.size() != cols_) {
            throw ShapeError("ragged initializer rows");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
    check_finite(data_);
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::fabs(x));
    return m;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
}

Matrix& Matrix::operator+=(const Matrix& other) {
    if (!same_shape(other)) throw ShapeError("shape mismatch in addition");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    if (!same_shape(other)) throw ShapeError("shape mismatch in subtraction");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("mat_mul: inner dimensions disagree");
    }
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    Matrix c(n, m);
    const double* ap = a.data().data();
    const double* bp = b.data().data();
    double* cp = c.data().data();
    // i-k-j order keeps b and c accesses contiguous; good enough at desk scale.
    for (std::size_t i = 0; i < n; ++i) {
        double* crow = cp + i * m;
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = ap[i * k + p];
            const double* brow = bp + p * m;
            for (std::size_t j = 0; j < m; ++j) {
                crow[j] += aip * brow[j];
            }
        }
    }
    return c;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }
Matrix operator*(const Matrix& a, const Matrix& b) { return mat_mul(a, b); }

Matrix operator-(Matrix a) { return a *= -1.0; }

bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data().data(), b.data().data(), a.size() * sizeof(double)) == 0;
}

double rel_frobenius_error(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw ShapeError("shape mismatch in error norm");
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        diff += d * d;
    }
    const double ref = b.frobenius_norm();
    return ref > 0.0 ? std::sqrt(diff) / ref : std::sqrt(diff);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw ShapeError("shape mismatch in error norm");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
    }
    return m;
}

}  // namespace eva
