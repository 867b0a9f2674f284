#pragma once

#include <array>
#include <tuple>
#include <utility>

#include "eva/generators.hpp"
#include "eva/matrix.hpp"

namespace eva {

/// Chained dimensions of a requested product. S2PM uses (n, s, m); S3PM uses
/// all four for A (n x s), B (s x t), C (t x m).
struct DimSpec {
    std::size_t n = 1;
    std::size_t s = 1;
    std::size_t t = 1;
    std::size_t m = 1;
};

/// Correlated disguising material for one party: disguising matrix R,
/// additive blind r, and the shared standard matrix St used for result
/// verification. Produced offline by the commodity server; independent of
/// every data operand.
struct PreprocessBundle {
    Matrix R;
    Matrix r;
    Matrix St;
};

/// Two-party bundles: R_a (n x s) and R_b (s x m) are rank-deficient with
/// rank min-1 (rank 1 when one side is a vector), St = R_a * R_b, and
/// r_a + r_b = St to machine precision. Requires s >= 2 so the rank
/// constraint that protects the peer operand is satisfiable.
///
/// Each disguising matrix is rescaled to the magnitude ceiling of the
/// operand it hides (derived from public workload parameters, never from
/// data); mismatched ceilings cost significant digits in the share sums.
std::pair<PreprocessBundle, PreprocessBundle> preprocess_s2pm(const DimSpec& dims, RngStream& rng,
                                                              double left_ceiling,
                                                              double right_ceiling);

std::pair<PreprocessBundle, PreprocessBundle> preprocess_s2pm(const DimSpec& dims,
                                                              RngStream& rng,
                                                              DynamicRange range = DynamicRange(4));

/// Three-party bundles: R_a, R_b, R_c are unconstrained random draws,
/// St = R_a * R_b * R_c, and r_a + r_b + r_c = St to machine precision.
std::tuple<PreprocessBundle, PreprocessBundle, PreprocessBundle> preprocess_s3pm(
    const DimSpec& dims, RngStream& rng, const std::array<double, 3>& ceilings);

std::tuple<PreprocessBundle, PreprocessBundle, PreprocessBundle> preprocess_s3pm(
    const DimSpec& dims, RngStream& rng, DynamicRange range = DynamicRange(4));

/// Magnitude ceiling of one dynamic-uniform operand: 10^(delta+1).
double range_ceiling(DynamicRange range);

}  // namespace eva
