#include "eva/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "eva/linalg.hpp"

namespace eva {

namespace {

Envelope make_envelope(const PartyCtx& ctx, std::uint16_t step_offset, Role receiver,
                       std::vector<Matrix> matrices) {
    Envelope e;
    e.protocol = static_cast<std::uint8_t>(ctx.protocol);
    e.session = ctx.session;
    e.step = static_cast<std::uint16_t>(ctx.step_base + step_offset);
    e.receiver = receiver;
    e.matrices = std::move(matrices);
    return e;
}

Envelope make_bundle_envelope(const PartyCtx& ctx, std::uint16_t step_offset, Role receiver,
                              std::vector<Matrix> matrices) {
    Envelope e = make_envelope(ctx, step_offset, receiver, std::move(matrices));
    e.protocol = static_cast<std::uint8_t>(ProtocolId::CsBundle);
    return e;
}

std::vector<Matrix> expect(PartyCtx& ctx, std::uint16_t step_offset, Role sender,
                           std::size_t count) {
    Envelope e = ctx.ep->recv(ctx.session, static_cast<std::uint16_t>(ctx.step_base + step_offset),
                              sender);
    if (e.matrices.size() != count) {
        throw TransportError("unexpected matrix count in protocol message");
    }
    return std::move(e.matrices);
}

PreprocessBundle expect_bundle(PartyCtx& ctx, std::uint16_t step_offset) {
    auto ms = expect(ctx, step_offset, Role::CommodityServer, 3);
    return PreprocessBundle{std::move(ms[0]), std::move(ms[1]), std::move(ms[2])};
}

// Random share drawn at the magnitude of the mass it hides, so share sums
// do not lose digits to scale mismatch.
Matrix draw_share(std::size_t rows, std::size_t cols, double scale, RngStream& rng) {
    Matrix v = gen_dynamic_uniform(rows, cols, DynamicRange(0), rng);
    v *= (scale > 0.0 ? scale : 1.0) / 10.0;
    return v;
}

// Computation-site fault injection; adds a single-element error scaled well
// above the verification tolerance.
void maybe_tamper(PartyCtx& ctx, TamperSpec::Target target, Matrix& m, const Matrix& st) {
    if (ctx.tamper.target != target || ctx.tamper.sub_index != ctx.sub_counter) return;
    if (ctx.tamper.scale_factor == 0.0) return;
    RngStream pick(ctx.tamper.element_seed, 0xEBAD);
    const std::size_t idx = pick.uniform_int(m.size());
    m.data()[idx] += ctx.tamper.scale_factor * ctx.verify.epsilon_rel * 3.0 * st.frobenius_norm();
}

void check_operand(const Matrix& operand, const Matrix& r, const char* what) {
    if (!operand.same_shape(r)) {
        throw ShapeError(std::string(what) + ": operand does not match preprocessing dims");
    }
}

}  // namespace

bool freivalds_accept(const Share& own, const std::vector<Matrix>& peer_vfs,
                      const VerifyConfig& cfg, RngStream& rng) {
    if (cfg.rounds < 1) {
        throw DegenerateInputError("verification needs at least one round");
    }
    Matrix residual = own.VF;
    double norm_sum = own.VF.frobenius_norm();
    for (const Matrix& vf : peer_vfs) {
        residual += vf;
        norm_sum += vf.frobenius_norm();
    }
    residual -= own.St;
    norm_sum += own.St.frobenius_norm();
    const double tol = cfg.epsilon_rel * norm_sum;

    for (std::size_t round = 0; round < cfg.rounds; ++round) {
        const Matrix delta = bernoulli_vector(residual.cols(), rng);
        const Matrix e = mat_mul(residual, delta);
        for (double x : e.data()) {
            if (std::fabs(x) > tol) return false;
        }
    }
    return true;
}

// --- S2PM -------------------------------------------------------------------

SubShare s2pm_run(PartyCtx& ctx, bool is_left, const Matrix& operand, Role left, Role right) {
    const Role peer = is_left ? right : left;
    Share share;
    Matrix peer_vf;

    if (is_left) {
        PreprocessBundle bundle = expect_bundle(ctx, 0);
        check_operand(operand, bundle.R, "s2pm left");
        ctx.ep->send(make_envelope(ctx, 2, peer, {operand + bundle.R}));
        Matrix b_hat = expect(ctx, 3, peer, 1)[0];
        auto vf_and_t = expect(ctx, 4, peer, 2);
        Matrix& vf_b = vf_and_t[0];
        Matrix& t = vf_and_t[1];

        const Matrix ra_bhat = mat_mul(bundle.R, b_hat);
        Matrix v = t + bundle.r - ra_bhat;
        maybe_tamper(ctx, TamperSpec::Target::ShareV, v, bundle.St);
        Matrix vf = v + ra_bhat;
        maybe_tamper(ctx, TamperSpec::Target::ShareVF, vf, bundle.St);
        ctx.ep->send(make_envelope(ctx, 5, peer, {vf}));

        share = Share{std::move(v), std::move(vf), std::move(bundle.St)};
        peer_vf = std::move(vf_b);
    } else {
        PreprocessBundle bundle = expect_bundle(ctx, 1);
        check_operand(operand, bundle.R, "s2pm right");
        ctx.ep->send(make_envelope(ctx, 3, peer, {operand + bundle.R}));
        Matrix a_hat = expect(ctx, 2, peer, 1)[0];

        const Matrix masked_product = mat_mul(a_hat, operand);
        Matrix v = draw_share(masked_product.rows(), masked_product.cols(),
                              masked_product.max_abs(), ctx.rng);
        Matrix vf = v - masked_product;
        Matrix t = bundle.r - vf;
        maybe_tamper(ctx, TamperSpec::Target::ShareVF, vf, bundle.St);
        // A fault in the right party's share lands in the same exchanged pair.
        maybe_tamper(ctx, TamperSpec::Target::ShareV, vf, bundle.St);
        ctx.ep->send(make_envelope(ctx, 4, peer, {vf, t}));
        Matrix vf_a = expect(ctx, 5, peer, 1)[0];

        share = Share{std::move(v), std::move(vf), std::move(bundle.St)};
        peer_vf = std::move(vf_a);
    }

    SubShare out;
    out.share = std::move(share);
    out.peer_vfs.push_back(std::move(peer_vf));
    if (ctx.verify.enabled) {
        out.accepted = freivalds_accept(out.share, out.peer_vfs, ctx.verify, ctx.rng);
    }
    ++ctx.sub_counter;
    return out;
}

void s2pm_serve_cs(PartyCtx& ctx, const DimSpec& dims, Role left, Role right,
                   double left_ceiling, double right_ceiling) {
    const double fallback = range_ceiling(ctx.range);
    auto [bundle_a, bundle_b] =
        preprocess_s2pm(dims, ctx.rng, left_ceiling > 0.0 ? left_ceiling : fallback,
                        right_ceiling > 0.0 ? right_ceiling : fallback);
    ctx.ep->send(make_bundle_envelope(ctx, 0, left,
                                      {std::move(bundle_a.R), std::move(bundle_a.r), bundle_a.St}));
    ctx.ep->send(make_bundle_envelope(ctx, 1, right,
                                      {std::move(bundle_b.R), std::move(bundle_b.r), bundle_b.St}));
    ++ctx.sub_counter;
}

// --- S3PM -------------------------------------------------------------------

namespace {

SubShare s3pm_p1(PartyCtx& ctx, const Matrix& a, const std::array<Role, 3>& p) {
    PreprocessBundle bundle = expect_bundle(ctx, 0);
    check_operand(a, bundle.R, "s3pm p1");
    ctx.ep->send(make_envelope(ctx, 3, p[1], {a + bundle.R}));

    auto psi2_gamma2 = expect(ctx, 6, p[1], 2);
    const Matrix& psi2 = psi2_gamma2[0];
    const Matrix& gamma2 = psi2_gamma2[1];
    const Matrix s_a = mat_mul(bundle.R, gamma2);
    const Matrix m_a = mat_mul(a, psi2);
    Matrix b1 = expect(ctx, 7, p[1], 1)[0];

    const Matrix mass = m_a + s_a;
    Matrix v = draw_share(mass.rows(), mass.cols(), mass.max_abs(), ctx.rng);
    Matrix vf = mass - v;
    Matrix t_a = vf - bundle.r;
    Matrix t1 = mat_mul(bundle.R, b1);
    maybe_tamper(ctx, TamperSpec::Target::ShareVF, vf, bundle.St);
    maybe_tamper(ctx, TamperSpec::Target::ShareV, vf, bundle.St);
    ctx.ep->send(make_envelope(ctx, 9, p[1], {t_a, vf}));
    ctx.ep->send(make_envelope(ctx, 10, p[2], {t1, vf}));

    Matrix vf_b = expect(ctx, 11, p[1], 1)[0];
    Matrix vf_c = expect(ctx, 13, p[2], 1)[0];

    SubShare out;
    out.share = Share{std::move(v), std::move(vf), std::move(bundle.St)};
    out.peer_vfs = {std::move(vf_b), std::move(vf_c)};
    return out;
}

SubShare s3pm_p2(PartyCtx& ctx, const Matrix& b, const std::array<Role, 3>& p) {
    PreprocessBundle bundle = expect_bundle(ctx, 1);
    check_operand(b, bundle.R, "s3pm p2");
    Matrix a_hat = expect(ctx, 3, p[0], 1)[0];
    Matrix c_hat = expect(ctx, 4, p[2], 1)[0];

    const Matrix b_hat = b + bundle.R;
    const Matrix psi1 = mat_mul(a_hat, b_hat);
    const Matrix gamma1 = mat_mul(a_hat, bundle.R);
    const Matrix psi2 = mat_mul(b_hat, c_hat);
    const Matrix gamma2 = mat_mul(bundle.R, c_hat);
    const Matrix m_b = mat_mul(gamma1, c_hat);
    ctx.ep->send(make_envelope(ctx, 5, p[2], {psi1, gamma1}));
    ctx.ep->send(make_envelope(ctx, 6, p[0], {psi2, gamma2}));

    auto [b1, b2] = full_rank_decompose(b_hat);
    ctx.ep->send(make_envelope(ctx, 7, p[0], {b1}));
    ctx.ep->send(make_envelope(ctx, 8, p[2], {b2}));

    auto ta_vfa = expect(ctx, 9, p[0], 2);
    Matrix& t_a = ta_vfa[0];
    Matrix& vf_a = ta_vfa[1];

    Matrix v = draw_share(m_b.rows(), m_b.cols(), m_b.max_abs(), ctx.rng);
    Matrix vf = -m_b - v;
    Matrix t_b = t_a + vf - bundle.r;
    maybe_tamper(ctx, TamperSpec::Target::ShareVF, vf, bundle.St);
    maybe_tamper(ctx, TamperSpec::Target::ShareV, vf, bundle.St);
    ctx.ep->send(make_envelope(ctx, 11, p[0], {vf}));
    ctx.ep->send(make_envelope(ctx, 12, p[2], {t_b, vf}));

    Matrix vf_c = expect(ctx, 14, p[2], 1)[0];

    SubShare out;
    out.share = Share{std::move(v), std::move(vf), std::move(bundle.St)};
    out.peer_vfs = {std::move(vf_a), std::move(vf_c)};
    return out;
}

SubShare s3pm_p3(PartyCtx& ctx, const Matrix& c, const std::array<Role, 3>& p) {
    PreprocessBundle bundle = expect_bundle(ctx, 2);
    check_operand(c, bundle.R, "s3pm p3");
    ctx.ep->send(make_envelope(ctx, 4, p[1], {c + bundle.R}));

    auto psi1_gamma1 = expect(ctx, 5, p[1], 2);
    const Matrix& psi1 = psi1_gamma1[0];
    const Matrix& gamma1 = psi1_gamma1[1];
    const Matrix s_c = mat_mul(gamma1, bundle.R);
    const Matrix m_c = mat_mul(psi1, bundle.R);

    Matrix b2 = expect(ctx, 8, p[1], 1)[0];
    auto t1_vfa = expect(ctx, 10, p[0], 2);
    Matrix& t1 = t1_vfa[0];
    Matrix& vf_a = t1_vfa[1];
    auto tb_vfb = expect(ctx, 12, p[1], 2);
    Matrix& t_b = tb_vfb[0];
    Matrix& vf_b = tb_vfb[1];

    const Matrix t2 = mat_mul(b2, bundle.R);
    const Matrix s_b = mat_mul(t1, t2);
    Matrix v = t_b - m_c + s_b + s_c - bundle.r;
    maybe_tamper(ctx, TamperSpec::Target::ShareV, v, bundle.St);
    Matrix vf = s_b + s_c - m_c - v;
    maybe_tamper(ctx, TamperSpec::Target::ShareVF, vf, bundle.St);
    ctx.ep->send(make_envelope(ctx, 13, p[0], {vf}));
    ctx.ep->send(make_envelope(ctx, 14, p[1], {vf}));

    SubShare out;
    out.share = Share{std::move(v), std::move(vf), std::move(bundle.St)};
    out.peer_vfs = {std::move(vf_a), std::move(vf_b)};
    return out;
}

}  // namespace

SubShare s3pm_run(PartyCtx& ctx, int position, const Matrix& operand,
                  const std::array<Role, 3>& parties) {
    SubShare out;
    switch (position) {
        case 0: out = s3pm_p1(ctx, operand, parties); break;
        case 1: out = s3pm_p2(ctx, operand, parties); break;
        case 2: out = s3pm_p3(ctx, operand, parties); break;
        default: throw DegenerateInputError("s3pm position must be 0, 1 or 2");
    }
    if (ctx.verify.enabled) {
        out.accepted = freivalds_accept(out.share, out.peer_vfs, ctx.verify, ctx.rng);
    }
    ++ctx.sub_counter;
    return out;
}

void s3pm_serve_cs(PartyCtx& ctx, const DimSpec& dims, const std::array<Role, 3>& parties,
                   const std::array<double, 3>& ceilings) {
    const bool custom = ceilings[0] > 0.0 || ceilings[1] > 0.0 || ceilings[2] > 0.0;
    const double fallback = range_ceiling(ctx.range);
    auto pick = [&](double c) { return c > 0.0 ? c : fallback; };
    auto [ba, bb, bc] =
        custom ? preprocess_s3pm(dims, ctx.rng,
                                 {pick(ceilings[0]), pick(ceilings[1]), pick(ceilings[2])})
               : preprocess_s3pm(dims, ctx.rng, ctx.range);
    ctx.ep->send(make_bundle_envelope(ctx, 0, parties[0], {std::move(ba.R), std::move(ba.r), ba.St}));
    ctx.ep->send(make_bundle_envelope(ctx, 1, parties[1], {std::move(bb.R), std::move(bb.r), bb.St}));
    ctx.ep->send(make_bundle_envelope(ctx, 2, parties[2], {std::move(bc.R), std::move(bc.r), bc.St}));
    ++ctx.sub_counter;
}

// --- S2PI -------------------------------------------------------------------

PartyResult s2pi_alice(PartyCtx& ctx, const Matrix& a) {
    if (a.rows() != a.cols()) throw ShapeError("s2pi: operands must be square");
    const std::uint16_t base = ctx.step_base;
    const Matrix p = gen_nonsingular(a.rows(), ctx.rng, ctx.cond_bound);

    ctx.step_base = base;
    SubShare s1 = s2pm_run(ctx, true, mat_mul(p, a), Role::Alice, Role::Bob);
    ctx.step_base = static_cast<std::uint16_t>(base + kS2pmSteps);
    SubShare s2 = s2pm_run(ctx, true, p, Role::Alice, Role::Bob);

    ctx.step_base = base;
    ctx.ep->send(make_envelope(ctx, 12, Role::Bob, {s1.share.V + s2.share.V}));

    ctx.step_base = static_cast<std::uint16_t>(base + 13);
    SubShare s3 = s2pm_run(ctx, false, p, Role::Bob, Role::Alice);
    ctx.step_base = base;
    return PartyResult{s3.share.V, s1.accepted && s2.accepted && s3.accepted};
}

PartyResult s2pi_bob(PartyCtx& ctx, const Matrix& b) {
    if (b.rows() != b.cols()) throw ShapeError("s2pi: operands must be square");
    const std::uint16_t base = ctx.step_base;
    const Matrix q = gen_nonsingular(b.rows(), ctx.rng, ctx.cond_bound);

    ctx.step_base = base;
    SubShare s1 = s2pm_run(ctx, false, q, Role::Alice, Role::Bob);
    ctx.step_base = static_cast<std::uint16_t>(base + kS2pmSteps);
    SubShare s2 = s2pm_run(ctx, false, mat_mul(b, q), Role::Alice, Role::Bob);

    ctx.step_base = base;
    Matrix v_a = expect(ctx, 12, Role::Alice, 1)[0];
    const Matrix t = v_a + s1.share.V + s2.share.V;
    // A singular P(A+B)Q cancels down to rounding noise of the share sum;
    // detect that rather than inverting noise. Aborts the protocol; a silent
    // retry would change the ledger and hide the conditioning problem.
    const double summand_scale =
        std::max({v_a.max_abs(), s1.share.V.max_abs(), s2.share.V.max_abs()});
    if (t.max_abs() <= 1e-12 * summand_scale * static_cast<double>(t.rows())) {
        throw SingularMatrixError("s2pi: A + B is numerically singular");
    }
    const Matrix ib_star = mat_mul(q, invert(t));

    ctx.step_base = static_cast<std::uint16_t>(base + 13);
    SubShare s3 = s2pm_run(ctx, true, ib_star, Role::Bob, Role::Alice);
    ctx.step_base = base;
    return PartyResult{s3.share.V, s1.accepted && s2.accepted && s3.accepted};
}

void s2pi_serve_cs(PartyCtx& ctx, std::size_t n, double operand_ceiling) {
    const DimSpec dims{n, n, 1, n};
    const std::uint16_t base = ctx.step_base;
    // Expected magnitudes of the congruence chain, from public parameters
    // only: operand ceiling, P/Q conditioning, and the matrix dimension.
    const double a_ceil = operand_ceiling > 0.0 ? operand_ceiling : range_ceiling(ctx.range);
    const double p_ceil = std::max(1.0, std::sqrt(ctx.cond_bound));
    const double root_n = std::sqrt(static_cast<double>(n));
    const double ia_ceil = a_ceil * p_ceil * root_n;
    const double t_ceil = a_ceil * p_ceil * p_ceil * static_cast<double>(n);
    const double t_inv_ceil = ctx.cond_bound * ctx.cond_bound / t_ceil;
    const double ib_star_ceil = p_ceil * root_n * t_inv_ceil;

    s2pm_serve_cs(ctx, dims, Role::Alice, Role::Bob, ia_ceil, p_ceil);
    ctx.step_base = static_cast<std::uint16_t>(base + kS2pmSteps);
    s2pm_serve_cs(ctx, dims, Role::Alice, Role::Bob, p_ceil, ia_ceil);
    ctx.step_base = static_cast<std::uint16_t>(base + 13);
    s2pm_serve_cs(ctx, dims, Role::Bob, Role::Alice, ib_star_ceil, p_ceil);
    ctx.step_base = base;
}

// --- S2PHM ------------------------------------------------------------------

PartyResult s2phm_alice(PartyCtx& ctx, const Matrix& a1, const Matrix& a2) {
    const std::uint16_t base = ctx.step_base;
    const Matrix local = mat_mul(a1, a2);
    SubShare s1 = s2pm_run(ctx, true, a1, Role::Alice, Role::Bob);
    ctx.step_base = static_cast<std::uint16_t>(base + kS2pmSteps);
    SubShare s2 = s2pm_run(ctx, false, a2, Role::Bob, Role::Alice);
    ctx.step_base = base;
    return PartyResult{local + s1.share.V + s2.share.V, s1.accepted && s2.accepted};
}

PartyResult s2phm_bob(PartyCtx& ctx, const Matrix& b1, const Matrix& b2) {
    const std::uint16_t base = ctx.step_base;
    const Matrix local = mat_mul(b1, b2);
    SubShare s1 = s2pm_run(ctx, false, b2, Role::Alice, Role::Bob);
    ctx.step_base = static_cast<std::uint16_t>(base + kS2pmSteps);
    SubShare s2 = s2pm_run(ctx, true, b1, Role::Bob, Role::Alice);
    ctx.step_base = base;
    return PartyResult{local + s1.share.V + s2.share.V, s1.accepted && s2.accepted};
}

void s2phm_serve_cs(PartyCtx& ctx, const DimSpec& dims, const std::array<double, 2>& ceilings) {
    const std::uint16_t base = ctx.step_base;
    s2pm_serve_cs(ctx, dims, Role::Alice, Role::Bob, ceilings[0], ceilings[1]);
    ctx.step_base = static_cast<std::uint16_t>(base + kS2pmSteps);
    s2pm_serve_cs(ctx, dims, Role::Bob, Role::Alice, ceilings[0], ceilings[1]);
    ctx.step_base = base;
}

// --- S3PHM ------------------------------------------------------------------

namespace {
constexpr std::array<Role, 3> kAbcOrder = {Role::Alice, Role::Bob, Role::Carol};
constexpr std::array<Role, 3> kBacOrder = {Role::Bob, Role::Alice, Role::Carol};
}  // namespace

PartyResult s3phm_alice(PartyCtx& ctx, const Matrix& a1, const Matrix& a2) {
    const std::uint16_t base = ctx.step_base;
    SubShare s0 = s2pm_run(ctx, true, mat_mul(a1, a2), Role::Alice, Role::Carol);
    ctx.step_base = static_cast<std::uint16_t>(base + 12);
    SubShare s2 = s3pm_run(ctx, 0, a1, kAbcOrder);
    ctx.step_base = static_cast<std::uint16_t>(base + 27);
    SubShare s3 = s3pm_run(ctx, 1, a2, kBacOrder);
    ctx.step_base = base;
    return PartyResult{s0.share.V + s2.share.V + s3.share.V,
                       s0.accepted && s2.accepted && s3.accepted};
}

PartyResult s3phm_bob(PartyCtx& ctx, const Matrix& b1, const Matrix& b2) {
    const std::uint16_t base = ctx.step_base;
    ctx.step_base = static_cast<std::uint16_t>(base + 6);
    SubShare s1 = s2pm_run(ctx, true, mat_mul(b1, b2), Role::Bob, Role::Carol);
    ctx.step_base = static_cast<std::uint16_t>(base + 12);
    SubShare s2 = s3pm_run(ctx, 1, b2, kAbcOrder);
    ctx.step_base = static_cast<std::uint16_t>(base + 27);
    SubShare s3 = s3pm_run(ctx, 0, b1, kBacOrder);
    ctx.step_base = base;
    return PartyResult{s1.share.V + s2.share.V + s3.share.V,
                       s1.accepted && s2.accepted && s3.accepted};
}

PartyResult s3phm_carol(PartyCtx& ctx, const Matrix& c) {
    const std::uint16_t base = ctx.step_base;
    SubShare s0 = s2pm_run(ctx, false, c, Role::Alice, Role::Carol);
    ctx.step_base = static_cast<std::uint16_t>(base + 6);
    SubShare s1 = s2pm_run(ctx, false, c, Role::Bob, Role::Carol);
    ctx.step_base = static_cast<std::uint16_t>(base + 12);
    SubShare s2 = s3pm_run(ctx, 2, c, kAbcOrder);
    ctx.step_base = static_cast<std::uint16_t>(base + 27);
    SubShare s3 = s3pm_run(ctx, 2, c, kBacOrder);
    ctx.step_base = base;
    return PartyResult{s0.share.V + s1.share.V + s2.share.V + s3.share.V,
                       s0.accepted && s1.accepted && s2.accepted && s3.accepted};
}

void s3phm_serve_cs(PartyCtx& ctx, const DimSpec& dims, const std::array<double, 3>& ceilings) {
    const std::uint16_t base = ctx.step_base;
    const DimSpec flat{dims.n, dims.t, 1, dims.m};
    // The S2PM legs see the local products A1*A2 and B1*B2 on the left.
    double star_ceil = 0.0;
    if (ceilings[0] > 0.0 && ceilings[1] > 0.0) {
        star_ceil = ceilings[0] * ceilings[1] * std::sqrt(static_cast<double>(dims.s));
    }
    s2pm_serve_cs(ctx, flat, Role::Alice, Role::Carol, star_ceil, ceilings[2]);
    ctx.step_base = static_cast<std::uint16_t>(base + 6);
    s2pm_serve_cs(ctx, flat, Role::Bob, Role::Carol, star_ceil, ceilings[2]);
    ctx.step_base = static_cast<std::uint16_t>(base + 12);
    s3pm_serve_cs(ctx, dims, kAbcOrder, ceilings);
    ctx.step_base = static_cast<std::uint16_t>(base + 27);
    s3pm_serve_cs(ctx, dims, kBacOrder, ceilings);
    ctx.step_base = base;
}

}  // namespace eva
