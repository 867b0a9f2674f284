#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eva/preprocess.hpp"
#include "oracle.hpp"

using namespace eva;

TEST_CASE("s2pm bundles satisfy the additive identity") {
    RngStream rng(1, 0);
    for (int rep = 0; rep < 20; ++rep) {
        const DimSpec dims{3 + rng.uniform_int(8), 2 + rng.uniform_int(8), 1,
                           3 + rng.uniform_int(8)};
        auto [a, b] = preprocess_s2pm(dims, rng);
        CHECK(rel_frobenius_error(a.r + b.r, mat_mul(a.R, b.R)) < 1e-12);
        CHECK(a.St == b.St);
        CHECK(a.St == mat_mul(a.R, b.R));
    }
}

TEST_CASE("s2pm disguising matrices are rank deficient") {
    RngStream rng(2, 0);
    const DimSpec dims{3, 3, 1, 3};
    auto [a, b] = preprocess_s2pm(dims, rng);
    CHECK(oracle::svd_rank(a.R) == 2);
    CHECK(oracle::svd_rank(b.R) == 2);
    CHECK(a.R.rows() == 3);
    CHECK(b.R.cols() == 3);
}

TEST_CASE("s2pm vector operands keep the security constraint") {
    RngStream rng(3, 0);
    // m = 1: R_b is a column, rank 1 < s.
    const DimSpec dims{4, 5, 1, 1};
    auto [a, b] = preprocess_s2pm(dims, rng);
    CHECK(b.R.cols() == 1);
    CHECK(oracle::svd_rank(a.R) == 3);
    CHECK(oracle::svd_rank(b.R) == 1);
    CHECK(rel_frobenius_error(a.r + b.r, mat_mul(a.R, b.R)) < 1e-12);

    // s = 1 would force a zero disguise; rejected.
    CHECK_THROWS_AS(preprocess_s2pm(DimSpec{4, 1, 1, 3}, rng), DegenerateInputError);
}

TEST_CASE("s3pm bundles satisfy the three-way identity") {
    RngStream rng(4, 0);
    for (int rep = 0; rep < 20; ++rep) {
        const DimSpec dims{1 + rng.uniform_int(6), 1 + rng.uniform_int(6),
                           1 + rng.uniform_int(6), 1 + rng.uniform_int(6)};
        auto [a, b, c] = preprocess_s3pm(dims, rng);
        const Matrix st = mat_mul(mat_mul(a.R, b.R), c.R);
        CHECK(rel_frobenius_error(a.r + b.r + c.r, st) < 1e-12);
        CHECK(a.St == b.St);
        CHECK(b.St == c.St);
    }
}

TEST_CASE("s3pm bundle shapes follow the chain") {
    RngStream rng(5, 0);
    const DimSpec dims{2, 3, 4, 2};
    auto [a, b, c] = preprocess_s3pm(dims, rng);
    CHECK(a.R.rows() == 2);
    CHECK(a.R.cols() == 3);
    CHECK(b.R.rows() == 3);
    CHECK(b.R.cols() == 4);
    CHECK(c.R.rows() == 4);
    CHECK(c.R.cols() == 2);
    CHECK(a.St.rows() == 2);
    CHECK(a.St.cols() == 2);
}

TEST_CASE("distinct sessions draw distinct bundles") {
    RngStream r1(6, 100), r2(6, 101);
    const DimSpec dims{4, 4, 4, 4};
    auto [a1, b1, c1] = preprocess_s3pm(dims, r1);
    auto [a2, b2, c2] = preprocess_s3pm(dims, r2);
    CHECK_FALSE(a1.R == a2.R);
    CHECK_FALSE(c1.r == c2.r);
}

TEST_CASE("bundle magnitude tracks the workload range") {
    RngStream rng(7, 0);
    auto [a, b] = preprocess_s2pm(DimSpec{6, 6, 1, 6}, rng, DynamicRange(2));
    CHECK(a.R.max_abs() == doctest::Approx(1e3));
    auto [a2, b2] = preprocess_s2pm(DimSpec{6, 6, 1, 6}, rng, DynamicRange(8));
    CHECK(a2.R.max_abs() == doctest::Approx(1e9));
}
