#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "eva/errors.hpp"

namespace eva {

/// Dense row-major Float64 matrix. The universal operand of every protocol
/// step; values are immutable once handed to another component.
class Matrix {
public:
    Matrix() = default;

    /// Zero-filled rows x cols matrix.
    Matrix(std::size_t rows, std::size_t cols);

    /// Takes ownership of row-major data; rejects size mismatch and
    /// non-finite elements.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    /// Literal-style construction: Matrix{{1,2},{3,4}}.
    Matrix(std::initializer_list<std::initializer_list<double>> init);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    Matrix transpose() const;

    double max_abs() const;
    double frobenius_norm() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Standard product; throws ShapeError when a.cols != b.rows.
Matrix mat_mul(const Matrix& a, const Matrix& b);

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(Matrix a);
bool operator==(const Matrix& a, const Matrix& b);

/// ||a - b||_F / ||b||_F, or the absolute norm when b is zero.
double rel_frobenius_error(const Matrix& a, const Matrix& b);

/// max_ij |a(i,j) - b(i,j)|.
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace eva
