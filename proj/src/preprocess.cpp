#include "eva/preprocess.hpp"

#include <cmath>

namespace eva {

namespace {

// Disguising matrix with the peer-protecting rank constraint. Matrix shapes
// use rank min-1 factors; vector shapes fall back to a plain random draw,
// whose rank 1 still satisfies the rank < s security constraint for s >= 2.
Matrix disguise_matrix(std::size_t rows, std::size_t cols, double ceiling, RngStream& rng) {
    Matrix m = std::min(rows, cols) >= 2 ? gen_rank_deficient(rows, cols, rng)
                                         : gen_dynamic_uniform(rows, cols, DynamicRange(0), rng);
    // A scalar factor cannot change the rank.
    m *= ceiling / m.max_abs();
    return m;
}

// Additive blind at the scale of the standard matrix it splits.
Matrix blind_like(const Matrix& st, RngStream& rng) {
    Matrix r = gen_dynamic_uniform(st.rows(), st.cols(), DynamicRange(0), rng);
    const double scale = st.max_abs();
    r *= (scale > 0.0 ? scale : 1.0) / 10.0;
    return r;
}

}  // namespace

double range_ceiling(DynamicRange range) { return std::pow(10.0, range.delta + 1); }

std::pair<PreprocessBundle, PreprocessBundle> preprocess_s2pm(const DimSpec& dims, RngStream& rng,
                                                              double left_ceiling,
                                                              double right_ceiling) {
    if (dims.s < 2) {
        throw DegenerateInputError(
            "preprocess_s2pm: inner dimension must be >= 2 for the rank constraint");
    }
    Matrix ra = disguise_matrix(dims.n, dims.s, left_ceiling, rng);
    Matrix rb = disguise_matrix(dims.s, dims.m, right_ceiling, rng);
    Matrix st = mat_mul(ra, rb);
    Matrix blind_a = blind_like(st, rng);
    Matrix blind_b = st - blind_a;
    return {PreprocessBundle{std::move(ra), std::move(blind_a), st},
            PreprocessBundle{std::move(rb), std::move(blind_b), st}};
}

std::pair<PreprocessBundle, PreprocessBundle> preprocess_s2pm(const DimSpec& dims,
                                                              RngStream& rng,
                                                              DynamicRange range) {
    const double ceiling = range_ceiling(range);
    return preprocess_s2pm(dims, rng, ceiling, ceiling);
}

std::tuple<PreprocessBundle, PreprocessBundle, PreprocessBundle> preprocess_s3pm(
    const DimSpec& dims, RngStream& rng, const std::array<double, 3>& ceilings) {
    Matrix ra = gen_dynamic_uniform(dims.n, dims.s, DynamicRange(0), rng);
    ra *= ceilings[0] / ra.max_abs();
    Matrix rb = gen_dynamic_uniform(dims.s, dims.t, DynamicRange(0), rng);
    rb *= ceilings[1] / rb.max_abs();
    Matrix rc = gen_dynamic_uniform(dims.t, dims.m, DynamicRange(0), rng);
    rc *= ceilings[2] / rc.max_abs();
    Matrix st = mat_mul(mat_mul(ra, rb), rc);
    Matrix blind_a = blind_like(st, rng);
    Matrix blind_b = blind_like(st, rng);
    Matrix blind_c = st - blind_a - blind_b;
    return {PreprocessBundle{std::move(ra), std::move(blind_a), st},
            PreprocessBundle{std::move(rb), std::move(blind_b), st},
            PreprocessBundle{std::move(rc), std::move(blind_c), st}};
}

std::tuple<PreprocessBundle, PreprocessBundle, PreprocessBundle> preprocess_s3pm(
    const DimSpec& dims, RngStream& rng, DynamicRange range) {
    // Workload-matched path: disguises come from the same dynamic-uniform
    // family as the inputs themselves.
    Matrix ra = gen_dynamic_uniform(dims.n, dims.s, range, rng);
    Matrix rb = gen_dynamic_uniform(dims.s, dims.t, range, rng);
    Matrix rc = gen_dynamic_uniform(dims.t, dims.m, range, rng);
    Matrix st = mat_mul(mat_mul(ra, rb), rc);
    Matrix blind_a = blind_like(st, rng);
    Matrix blind_b = blind_like(st, rng);
    Matrix blind_c = st - blind_a - blind_b;
    return {PreprocessBundle{std::move(ra), std::move(blind_a), st},
            PreprocessBundle{std::move(rb), std::move(blind_b), st},
            PreprocessBundle{std::move(rc), std::move(blind_c), st}};
}

}  // namespace eva
