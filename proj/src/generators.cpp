#include "eva/generators.hpp"

#include <cmath>

#include "eva/linalg.hpp"

namespace eva {

namespace {

// One element of the +-1.a1...a15 x 10^e family.
double dynamic_element(int delta, RngStream& rng) {
    const int e = -delta + static_cast<int>(rng.uniform_int(2 * delta + 1));
    double mant = 1.0 + 9.0 * rng.uniform01();
    mant = std::round(mant * 1e14) / 1e14;  // 15 significant decimal digits
    if (mant >= 10.0) mant = 9.99999999999999;
    const double sign = rng.coin() ? 1.0 : -1.0;
    return sign * mant * std::pow(10.0, e);
}

}  // namespace

Matrix gen_dynamic_uniform(std::size_t rows, std::size_t cols, DynamicRange range,
                           RngStream& rng) {
    Matrix m(rows, cols);
    for (double& x : m.data()) x = dynamic_element(range.delta, rng);
    return m;
}

Matrix gen_rank_deficient(std::size_t rows, std::size_t cols, RngStream& rng) {
    if (std::min(rows, cols) < 2) {
        throw DegenerateInputError(
            "gen_rank_deficient: need min(rows, cols) >= 2, rank 0 is not representable");
    }
    const std::size_t k = std::min(rows, cols) - 1;
    // Unit-exponent factors keep the singular-value spread tight, so the
    // product's numerical rank is k with a wide margin.
    const Matrix l = gen_dynamic_uniform(rows, k, DynamicRange(0), rng);
    const Matrix r = gen_dynamic_uniform(k, cols, DynamicRange(0), rng);
    return mat_mul(l, r);
}

Matrix gen_nonsingular(std::size_t n, RngStream& rng, double cond_bound) {
    if (n == 0) throw ShapeError("gen_nonsingular: n must be positive");
    if (cond_bound < 1.0) {
        throw DegenerateInputError("gen_nonsingular: cond_bound must be >= 1");
    }
    const double max_log = 0.5 * std::log10(cond_bound);
    if (n == 1) {
        const double d = std::pow(10.0, rng.uniform(0.0, max_log));
        return Matrix{{rng.coin() ? d : -d}};
    }
    Matrix g1(n, n), g2(n, n);
    for (double& x : g1.data()) x = rng.normal();
    for (double& x : g2.data()) x = rng.normal();
    const Matrix q1 = qr_orthogonal(g1);
    Matrix q2 = qr_orthogonal(g2);
    // Scale rows of q2 by the log-uniform diagonal, then left-rotate.
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::pow(10.0, rng.uniform(0.0, max_log));
        for (std::size_t j = 0; j < n; ++j) q2(i, j) *= d;
    }
    return mat_mul(q1, q2);
}

Matrix bernoulli_vector(std::size_t m, RngStream& rng) {
    Matrix v(m, 1);
    for (double& x : v.data()) x = rng.coin() ? 1.0 : 0.0;
    return v;
}

}  // namespace eva
