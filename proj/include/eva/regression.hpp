#pragma once

#include "eva/runner.hpp"

namespace eva {

/// Vertically partitioned design matrix: x1 and x2 are n x d zero-padded
/// column splits whose sum reconstructs the full design (intercept column
/// included in x1); labels y stay with the third party.
struct VerticalDataset {
    Matrix x1;
    Matrix x2;
    Matrix y;
    std::size_t split_col = 0;  // first column owned by the second party
};

/// Column-wise standardization fitted on training features.
struct StandardizeParams {
    std::vector<double> mean;
    std::vector<double> stddev;
    std::vector<bool> constant;  // zero-variance columns, centered only

    bool any_constant() const;
};

/// Fit mean/std per column (sample std, n-1). Zero-variance columns are
/// flagged and later only centered.
StandardizeParams standardize_fit(const Matrix& features);

/// Apply fitted parameters; works on training and test features alike.
Matrix standardize_apply(const Matrix& features, const StandardizeParams& params);

/// Split features into the padded vertical halves, prepending the intercept
/// column of ones (owned by the first party). first_cols counts the raw
/// feature columns owned by party one.
VerticalDataset vertical_split(const Matrix& features, const Matrix& labels,
                               std::size_t first_cols);

// --- S3PLRT: S2PHM + S2PI + S3PHM, 73 rounds ---------------------------------
// sub 0 at +0:  d1 + d2 = (X1^T + X2^T)(X1 + X2)
// sub 1 at +12: u1 + u2 = (d1 + d2)^-1
// sub 2 at +31: b1 + b2 + b3 = (u1 + u2)(X1^T + X2^T) Y
inline constexpr std::uint16_t kS3plrtSteps = 73;

PartyResult s3plrt_alice(PartyCtx& ctx, const Matrix& x1);
PartyResult s3plrt_bob(PartyCtx& ctx, const Matrix& x2);
PartyResult s3plrt_carol(PartyCtx& ctx, const Matrix& y);
void s3plrt_serve_cs(PartyCtx& ctx, std::size_t samples, std::size_t dims);

// --- S3PLRP: S2PHM + two S2PM, 24 rounds --------------------------------------
// sub 0 at +0:  (X1* + X2*)(b1 + b2)
// sub 1 at +12: X1* x b3 with Carol
// sub 2 at +18: X2* x b3 with Carol
inline constexpr std::uint16_t kS3plrpSteps = 24;

PartyResult s3plrp_alice(PartyCtx& ctx, const Matrix& x1_test, const Matrix& beta1);
PartyResult s3plrp_bob(PartyCtx& ctx, const Matrix& x2_test, const Matrix& beta2);
PartyResult s3plrp_carol(PartyCtx& ctx, const Matrix& beta3);
void s3plrp_serve_cs(PartyCtx& ctx, std::size_t samples, std::size_t dims);

/// In-process drivers. Shares come back in party order; sum reconstructs
/// beta (training) or the prediction vector.
ProtocolRun run_s3plrt(const Matrix& x1, const Matrix& x2, const Matrix& y,
                       const RunOptions& opts);
ProtocolRun run_s3plrp(const Matrix& x1_test, const Matrix& x2_test, const Matrix& beta1,
                       const Matrix& beta2, const Matrix& beta3, const RunOptions& opts);

/// Plaintext normal-equation solution (X^T X)^-1 X^T y; the baseline the
/// secure path is measured against.
Matrix plain_least_squares(const Matrix& x, const Matrix& y);

}  // namespace eva
