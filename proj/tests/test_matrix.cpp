#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eva/matrix.hpp"

using eva::Matrix;

TEST_CASE("identity times anything is a no-op") {
    const Matrix m{{1.5, -2.0, 3.0}, {0.0, 4.0, -5.5}, {7.0, 8.0, 9.0}};
    CHECK(mat_mul(Matrix::identity(3), m) == m);
    CHECK(mat_mul(m, Matrix::identity(3)) == m);
}

TEST_CASE("hand-computed 2x2 product") {
    const Matrix a{{1, 2}, {3, 4}};
    const Matrix b{{5, 6}, {7, 8}};
    const Matrix expected{{19, 22}, {43, 50}};
    CHECK(mat_mul(a, b) == expected);
}

TEST_CASE("zero matrix annihilates") {
    const Matrix z(4, 4);
    Matrix m(4, 4);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = static_cast<double>(i) - 7.5;
    CHECK(mat_mul(z, m) == z);
    CHECK(mat_mul(m, z) == z);
}

TEST_CASE("shape mismatch throws") {
    const Matrix a(2, 3);
    const Matrix b(2, 3);
    CHECK_THROWS_AS(mat_mul(a, b), eva::ShapeError);
    CHECK_THROWS_AS(a + Matrix(3, 2), eva::ShapeError);
}

TEST_CASE("constructors validate invariants") {
    CHECK_THROWS_AS(Matrix(0, 3), eva::ShapeError);
    CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), eva::ShapeError);
    CHECK_THROWS_AS(Matrix(1, 2, {1.0, std::numeric_limits<double>::infinity()}),
                    eva::ShapeError);
    CHECK_THROWS_AS(Matrix(1, 1, {std::nan("")}), eva::ShapeError);
}

TEST_CASE("transpose and norms") {
    const Matrix m{{1, 2, 3}, {4, 5, 6}};
    const Matrix t = m.transpose();
    CHECK(t.rows() == 3);
    CHECK(t(0, 1) == 4.0);
    CHECK(m.max_abs() == 6.0);
    CHECK(m.frobenius_norm() == doctest::Approx(std::sqrt(91.0)));
}

TEST_CASE("rel_frobenius_error") {
    const Matrix a{{1, 0}, {0, 1}};
    CHECK(eva::rel_frobenius_error(a, a) == 0.0);
    const Matrix b{{1, 0}, {0, 2}};
    CHECK(eva::rel_frobenius_error(a, b) == doctest::Approx(1.0 / std::sqrt(5.0)));
}
