#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "eva/csv.hpp"
#include "eva/linalg.hpp"
#include "eva/metrics.hpp"
#include "eva/regression.hpp"
#include "oracle.hpp"

using namespace eva;

namespace {

struct Synth {
    Matrix x;   // standardized features
    Matrix y;
    Matrix beta_true;  // with intercept first
};

Synth make_synth(std::size_t n, std::size_t m, std::uint64_t seed, double noise = 0.0) {
    RngStream rng(seed, 42);
    Synth s;
    Matrix raw(n, m);
    for (double& v : raw.data()) v = rng.normal();
    s.x = standardize_apply(raw, standardize_fit(raw));
    s.beta_true = Matrix(m + 1, 1);
    for (double& v : s.beta_true.data()) v = rng.uniform(-2.0, 2.0);
    s.y = Matrix(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        double y = s.beta_true(0, 0);
        for (std::size_t j = 0; j < m; ++j) y += s.x(i, j) * s.beta_true(j + 1, 0);
        s.y(i, 0) = y + noise * rng.normal();
    }
    return s;
}

}  // namespace

TEST_CASE("standardize") {
    SUBCASE("simple column") {
        const Matrix col{{1}, {2}, {3}};
        const auto p = standardize_fit(col);
        const Matrix out = standardize_apply(col, p);
        CHECK(out(0, 0) == doctest::Approx(-1.0));
        CHECK(out(1, 0) == doctest::Approx(0.0));
        CHECK(out(2, 0) == doctest::Approx(1.0));
    }
    SUBCASE("constant column flagged and centered") {
        const Matrix col{{5}, {5}, {5}};
        const auto p = standardize_fit(col);
        CHECK(p.any_constant());
        const Matrix out = standardize_apply(col, p);
        CHECK(out(0, 0) == 0.0);
    }
    SUBCASE("train params carry to test data") {
        RngStream rng(3, 0);
        Matrix train(20, 3), test(5, 3);
        for (double& v : train.data()) v = rng.uniform(-4.0, 9.0);
        for (double& v : test.data()) v = rng.uniform(-4.0, 9.0);
        const auto p = standardize_fit(train);
        const Matrix out = standardize_apply(test, p);
        CHECK(out(2, 1) == doctest::Approx((test(2, 1) - p.mean[1]) / p.stddev[1]));
    }
}

TEST_CASE("vertical split partitions exactly") {
    RngStream rng(4, 0);
    Matrix x(6, 4);
    for (double& v : x.data()) v = rng.normal();
    Matrix y(6, 1);
    for (double& v : y.data()) v = rng.normal();
    const VerticalDataset ds = vertical_split(x, y, 2);
    CHECK(ds.x1.cols() == 5);
    // Intercept lives in x1 only.
    CHECK(ds.x1(0, 0) == 1.0);
    CHECK(ds.x2(0, 0) == 0.0);
    // Sum reconstructs [1 | x] bitwise; supports are disjoint.
    const Matrix design = ds.x1 + ds.x2;
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(design(i, 0) == 1.0);
        for (std::size_t j = 0; j < 4; ++j) CHECK(design(i, j + 1) == x(i, j));
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK((ds.x1(i, j) == 0.0 || ds.x2(i, j) == 0.0));
        }
    }
}

TEST_CASE("s3plrt recovers the least-squares solution") {
    const Synth s = make_synth(80, 5, 7, 0.05);
    const VerticalDataset ds = vertical_split(s.x, s.y, 3);
    RunOptions opts;
    opts.range = DynamicRange(0);
    const ProtocolRun run = run_s3plrt(ds.x1, ds.x2, ds.y, opts);
    CHECK(run.accepted);
    CHECK(run.stats.rounds() == 73);

    const Matrix design = ds.x1 + ds.x2;
    const Matrix beta_oracle = oracle::least_squares(design, s.y);
    const double lnre =
        (run.sum - beta_oracle).frobenius_norm() / run.sum.frobenius_norm();
    CHECK(lnre < 1e-6);
}

TEST_CASE("s3plrt with orthonormal design recovers beta exactly") {
    // Orthonormal columns: X^T X = I, so beta = X^T y.
    const std::size_t n = 16;
    RngStream rng(9, 0);
    Matrix g(n, n);
    for (double& v : g.data()) v = rng.normal();
    const Matrix q = qr_orthogonal(g);
    Matrix x1(n, 4), x2(n, 4);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            if (j < 2) x1(i, j) = q(i, j);
            else x2(i, j) = q(i, j);
        }
    }
    Matrix beta_star{{0.5}, {-1.25}, {2.0}, {0.75}};
    const Matrix y = mat_mul(x1 + x2, beta_star);
    RunOptions opts;
    opts.range = DynamicRange(0);
    const ProtocolRun run = run_s3plrt(x1, x2, y, opts);
    CHECK(run.accepted);
    CHECK(rel_frobenius_error(run.sum, beta_star) < 1e-9);
}

TEST_CASE("s3plrp predicts and composes 24 rounds") {
    const Synth s = make_synth(60, 4, 11, 0.0);
    const VerticalDataset ds = vertical_split(s.x, s.y, 2);
    RunOptions opts;
    opts.range = DynamicRange(0);
    const ProtocolRun train = run_s3plrt(ds.x1, ds.x2, ds.y, opts);

    RunOptions popts = opts;
    popts.session = 2;
    const ProtocolRun pred = run_s3plrp(ds.x1, ds.x2, train.shares[0], train.shares[1],
                                        train.shares[2], popts);
    CHECK(pred.accepted);
    CHECK(pred.stats.rounds() == 24);
    const Matrix y_hat_plain = mat_mul(ds.x1 + ds.x2, train.sum);
    CHECK(max_abs_diff(pred.sum, y_hat_plain) / y_hat_plain.max_abs() < 1e-10);
}

TEST_CASE("s3plrp with zero beta3 reduces to the hybrid part") {
    const Synth s = make_synth(30, 3, 13, 0.0);
    const VerticalDataset ds = vertical_split(s.x, s.y, 2);
    RunOptions opts;
    opts.range = DynamicRange(0);
    const Matrix b1{{0.1}, {0.2}, {0.3}, {0.4}};
    const Matrix b2{{-0.3}, {0.5}, {0.0}, {1.0}};
    const Matrix b3(4, 1);
    const ProtocolRun pred = run_s3plrp(ds.x1, ds.x2, b1, b2, b3, opts);
    CHECK(pred.accepted);
    const Matrix expected = mat_mul(ds.x1 + ds.x2, b1 + b2);
    CHECK(rel_frobenius_error(pred.sum, expected) < 1e-9);
}

TEST_CASE("label privacy: carol's envelopes never carry raw labels") {
    const Synth s = make_synth(40, 3, 17, 0.1);
    const VerticalDataset ds = vertical_split(s.x, s.y, 2);
    RunOptions opts;
    opts.range = DynamicRange(0);
    std::vector<Matrix> carol_sent;
    std::mutex mu;
    opts.observer = [&](const Envelope& e) {
        if (e.sender == Role::Carol) {
            std::lock_guard lock(mu);
            for (const auto& m : e.matrices) carol_sent.push_back(m);
        }
    };
    run_s3plrt(ds.x1, ds.x2, ds.y, opts);
    for (const Matrix& m : carol_sent) {
        if (m.same_shape(ds.y)) {
            CHECK(rel_frobenius_error(m, ds.y) > 1e-6);
        }
    }
}

TEST_CASE("metrics") {
    SUBCASE("perfect prediction") {
        const Matrix y{{1}, {2}, {3}};
        const Matrix beta{{1}, {1}};
        const auto rep = evaluate(y, y, beta, beta, 0.5);
        CHECK(rep.mae == 0.0);
        CHECK(rep.mse == 0.0);
        CHECK(rep.r2 == 1.0);
        CHECK(rep.lnre == 0.0);
        CHECK(rep.mre == 0.0);
    }
    SUBCASE("hand values") {
        const Matrix y{{1}, {2}};
        const Matrix y_hat{{1}, {3}};
        const Matrix beta{{1}};
        const auto rep = evaluate(y_hat, y, beta, beta, r_squared(y_hat, y));
        CHECK(rep.mae == doctest::Approx(0.5));
        CHECK(rep.mse == doctest::Approx(0.5));
        CHECK(rep.rmse == doctest::Approx(0.70710678));
        CHECK(rep.rrs == 0.0);
    }
    SUBCASE("undefined metrics throw") {
        const Matrix y{{1}, {1}};
        const Matrix beta{{1}};
        CHECK_THROWS_AS(r_squared(y, y), UndefinedMetricError);
        CHECK_THROWS_AS(evaluate(y, Matrix{{1}, {2}}, Matrix(1, 1), beta, 0.5),
                        UndefinedMetricError);
    }
}

TEST_CASE("csv ingestion") {
    const char* path = "/tmp/eva_test_table.csv";
    {
        std::ofstream out(path);
        out << "a,b,target\n1,2,3\n4,5,6\n7,8,9\n";
    }
    const CsvTable table = read_csv(path);
    CHECK(table.header.size() == 3);
    CHECK(table.values.rows() == 3);
    CHECK(table.column("target") == 2);
    CHECK(table.column("1") == 1);
    CHECK_THROWS_AS(table.column("missing"), DegenerateInputError);
    const Matrix rest = table.drop_column(2);
    CHECK(rest.cols() == 2);
    CHECK(rest(1, 1) == 5.0);
    const Matrix label = table.take_column(2);
    CHECK(label(2, 0) == 9.0);

    {
        std::ofstream out(path);
        out << "a,b\n1,oops\n";
    }
    CHECK_THROWS_AS(read_csv(path), DegenerateInputError);
    std::remove(path);
}
