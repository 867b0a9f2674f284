#pragma once

#include "eva/matrix.hpp"
#include "eva/rng.hpp"

namespace eva {

/// Decimal dynamic range of generated data: element exponents are drawn
/// uniformly from the integer grid [-delta, +delta].
struct DynamicRange {
    int delta = 4;

    explicit DynamicRange(int d = 4) : delta(d) {
        if (d < 0 || d > 10) {
            throw DegenerateInputError("dynamic range delta must lie in [0, 10]");
        }
    }
};

/// Random matrix with elements +-1.a1...a15 x 10^e, e uniform in
/// [-delta, +delta], signs symmetric.
Matrix gen_dynamic_uniform(std::size_t rows, std::size_t cols, DynamicRange range,
                           RngStream& rng);

/// Random matrix of numerical rank exactly min(rows, cols) - 1, built as a
/// product of full-rank factors so it keeps a generic random profile.
/// Requires min(rows, cols) >= 2.
Matrix gen_rank_deficient(std::size_t rows, std::size_t cols, RngStream& rng);

/// Random nonsingular n x n matrix with 2-norm condition number bounded by
/// cond_bound: orthogonal x log-uniform diagonal x orthogonal.
Matrix gen_nonsingular(std::size_t n, RngStream& rng, double cond_bound = 1e3);

/// Column vector of independent fair 0/1 draws.
Matrix bernoulli_vector(std::size_t m, RngStream& rng);

}  // namespace eva
