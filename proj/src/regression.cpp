#include "eva/regression.hpp"

#include <cmath>

#include "eva/linalg.hpp"

namespace eva {

bool StandardizeParams::any_constant() const {
    for (bool c : constant) {
        if (c) return true;
    }
    return false;
}

StandardizeParams standardize_fit(const Matrix& features) {
    const std::size_t n = features.rows(), m = features.cols();
    if (n < 2) throw DegenerateInputError("standardize: need at least two samples");
    StandardizeParams p;
    p.mean.resize(m);
    p.stddev.resize(m);
    p.constant.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += features(i, j);
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = features(i, j) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        p.mean[j] = mean;
        p.constant[j] = sd == 0.0;
        p.stddev[j] = p.constant[j] ? 1.0 : sd;
    }
    return p;
}

Matrix standardize_apply(const Matrix& features, const StandardizeParams& params) {
    if (features.cols() != params.mean.size()) {
        throw ShapeError("standardize: column count does not match fitted params");
    }
    Matrix out = features;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        for (std::size_t j = 0; j < out.cols(); ++j) {
            out(i, j) = (out(i, j) - params.mean[j]) / params.stddev[j];
        }
    }
    return out;
}

VerticalDataset vertical_split(const Matrix& features, const Matrix& labels,
                               std::size_t first_cols) {
    if (labels.cols() != 1 || labels.rows() != features.rows()) {
        throw ShapeError("vertical_split: labels must be an n x 1 column");
    }
    if (first_cols > features.cols()) {
        throw ShapeError("vertical_split: split beyond the feature count");
    }
    const std::size_t n = features.rows();
    const std::size_t d = features.cols() + 1;  // + intercept
    VerticalDataset ds;
    ds.x1 = Matrix(n, d);
    ds.x2 = Matrix(n, d);
    ds.y = labels;
    ds.split_col = first_cols + 1;
    for (std::size_t i = 0; i < n; ++i) {
        ds.x1(i, 0) = 1.0;
        for (std::size_t j = 0; j < features.cols(); ++j) {
            (j < first_cols ? ds.x1 : ds.x2)(i, j + 1) = features(i, j);
        }
    }
    return ds;
}

PartyResult s3plrt_alice(PartyCtx& ctx, const Matrix& x1) {
    const std::uint16_t base = ctx.step_base;
    PartyResult d1 = s2phm_alice(ctx, x1.transpose(), x1);
    ctx.step_base = static_cast<std::uint16_t>(base + kS2phmSteps);
    PartyResult u1 = s2pi_alice(ctx, d1.v);
    ctx.step_base = static_cast<std::uint16_t>(base + kS2phmSteps + kS2piSteps);
    PartyResult b1 = s3phm_alice(ctx, u1.v, x1.transpose());
    ctx.step_base = base;
    return PartyResult{b1.v, d1.accepted && u1.accepted && b1.accepted};
}

PartyResult s3plrt_bob(PartyCtx& ctx, const Matrix& x2) {
    const std::uint16_t base = ctx.step_base;
    PartyResult d2 = s2phm_bob(ctx, x2.transpose(), x2);
    ctx.step_base = static_cast<std::uint16_t>(base + kS2phmSteps);
    PartyResult u2 = s2pi_bob(ctx, d2.v);
    ctx.step_base = static_cast<std::uint16_t>(base + kS2phmSteps + kS2piSteps);
    PartyResult b2 = s3phm_bob(ctx, u2.v, x2.transpose());
    ctx.step_base = base;
    return PartyResult{b2.v, d2.accepted && u2.accepted && b2.accepted};
}

PartyResult s3plrt_carol(PartyCtx& ctx, const Matrix& y) {
    const std::uint16_t base = ctx.step_base;
    ctx.step_base = static_cast<std::uint16_t>(base + kS2phmSteps + kS2piSteps);
    PartyResult b3 = s3phm_carol(ctx, y);
    ctx.step_base = base;
    return b3;
}

void s3plrt_serve_cs(PartyCtx& ctx, std::size_t samples, std::size_t dims) {
    const std::uint16_t base = ctx.step_base;
    // Public scale chain: standardized designs have O(ceiling) entries, the
    // Gram matrix grows by the sample count, its inverse shrinks by it.
    const double x_ceil = range_ceiling(ctx.range);
    const double gram_ceil = x_ceil * x_ceil * static_cast<double>(samples);
    const double inv_ceil = ctx.cond_bound / gram_ceil;

    s2phm_serve_cs(ctx, DimSpec{dims, samples, 1, dims}, {x_ceil, x_ceil});
    ctx.step_base = static_cast<std::uint16_t>(base + kS2phmSteps);
    s2pi_serve_cs(ctx, dims, gram_ceil);
    ctx.step_base = static_cast<std::uint16_t>(base + kS2phmSteps + kS2piSteps);
    s3phm_serve_cs(ctx, DimSpec{dims, dims, samples, 1}, {inv_ceil, x_ceil, x_ceil});
    ctx.step_base = base;
}

PartyResult s3plrp_alice(PartyCtx& ctx, const Matrix& x1_test, const Matrix& beta1) {
    const std::uint16_t base = ctx.step_base;
    PartyResult y11 = s2phm_alice(ctx, x1_test, beta1);
    ctx.step_base = static_cast<std::uint16_t>(base + kS2phmSteps);
    SubShare y12 = s2pm_run(ctx, true, x1_test, Role::Alice, Role::Carol);
    ctx.step_base = base;
    return PartyResult{y11.v + y12.share.V, y11.accepted && y12.accepted};
}

PartyResult s3plrp_bob(PartyCtx& ctx, const Matrix& x2_test, const Matrix& beta2) {
    const std::uint16_t base = ctx.step_base;
    PartyResult y21 = s2phm_bob(ctx, x2_test, beta2);
    ctx.step_base = static_cast<std::uint16_t>(base + kS2phmSteps + kS2pmSteps);
    SubShare y22 = s2pm_run(ctx, true, x2_test, Role::Bob, Role::Carol);
    ctx.step_base = base;
    return PartyResult{y21.v + y22.share.V, y21.accepted && y22.accepted};
}

PartyResult s3plrp_carol(PartyCtx& ctx, const Matrix& beta3) {
    const std::uint16_t base = ctx.step_base;
    ctx.step_base = static_cast<std::uint16_t>(base + kS2phmSteps);
    SubShare y31 = s2pm_run(ctx, false, beta3, Role::Alice, Role::Carol);
    ctx.step_base = static_cast<std::uint16_t>(base + kS2phmSteps + kS2pmSteps);
    SubShare y32 = s2pm_run(ctx, false, beta3, Role::Bob, Role::Carol);
    ctx.step_base = base;
    return PartyResult{y31.share.V + y32.share.V, y31.accepted && y32.accepted};
}

void s3plrp_serve_cs(PartyCtx& ctx, std::size_t samples, std::size_t dims) {
    const std::uint16_t base = ctx.step_base;
    const double x_ceil = range_ceiling(ctx.range);
    const DimSpec leg{samples, dims, 1, 1};
    s2phm_serve_cs(ctx, leg, {x_ceil, x_ceil});
    ctx.step_base = static_cast<std::uint16_t>(base + kS2phmSteps);
    s2pm_serve_cs(ctx, leg, Role::Alice, Role::Carol, x_ceil, x_ceil);
    ctx.step_base = static_cast<std::uint16_t>(base + kS2phmSteps + kS2pmSteps);
    s2pm_serve_cs(ctx, leg, Role::Bob, Role::Carol, x_ceil, x_ceil);
    ctx.step_base = base;
}

ProtocolRun run_s3plrt(const Matrix& x1, const Matrix& x2, const Matrix& y,
                       const RunOptions& opts) {
    if (!x1.same_shape(x2) || y.rows() != x1.rows() || y.cols() != 1) {
        throw ShapeError("s3plrt: expected n x d splits and an n x 1 label column");
    }
    PartyResult out_a, out_b, out_c;
    ProtocolRun run;
    run.stats = drive_session(
        opts, ProtocolId::S3PLRT,
        {
            {Role::Alice, [&](PartyCtx& ctx) { out_a = s3plrt_alice(ctx, x1); }},
            {Role::Bob, [&](PartyCtx& ctx) { out_b = s3plrt_bob(ctx, x2); }},
            {Role::Carol, [&](PartyCtx& ctx) { out_c = s3plrt_carol(ctx, y); }},
            {Role::CommodityServer,
             [&](PartyCtx& ctx) { s3plrt_serve_cs(ctx, x1.rows(), x1.cols()); }},
        });
    run.shares = {out_a.v, out_b.v, out_c.v};
    run.sum = out_a.v + out_b.v + out_c.v;
    run.accepted = out_a.accepted && out_b.accepted && out_c.accepted;
    return run;
}

ProtocolRun run_s3plrp(const Matrix& x1_test, const Matrix& x2_test, const Matrix& beta1,
                       const Matrix& beta2, const Matrix& beta3, const RunOptions& opts) {
    if (!x1_test.same_shape(x2_test) || beta1.cols() != 1 ||
        beta1.rows() != x1_test.cols() || !beta1.same_shape(beta2) ||
        !beta2.same_shape(beta3)) {
        throw ShapeError("s3plrp: test splits must be n x d with d x 1 model shares");
    }
    PartyResult out_a, out_b, out_c;
    ProtocolRun run;
    run.stats = drive_session(
        opts, ProtocolId::S3PLRP,
        {
            {Role::Alice, [&](PartyCtx& ctx) { out_a = s3plrp_alice(ctx, x1_test, beta1); }},
            {Role::Bob, [&](PartyCtx& ctx) { out_b = s3plrp_bob(ctx, x2_test, beta2); }},
            {Role::Carol, [&](PartyCtx& ctx) { out_c = s3plrp_carol(ctx, beta3); }},
            {Role::CommodityServer,
             [&](PartyCtx& ctx) { s3plrp_serve_cs(ctx, x1_test.rows(), x1_test.cols()); }},
        });
    run.shares = {out_a.v, out_b.v, out_c.v};
    run.sum = out_a.v + out_b.v + out_c.v;
    run.accepted = out_a.accepted && out_b.accepted && out_c.accepted;
    return run;
}

Matrix plain_least_squares(const Matrix& x, const Matrix& y) {
    const Matrix xt = x.transpose();
    return mat_mul(mat_mul(invert(mat_mul(xt, x)), xt), y);
}

}  // namespace eva
