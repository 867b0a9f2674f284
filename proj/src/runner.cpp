#include "eva/runner.hpp"

#include <thread>

namespace eva {

namespace {

std::vector<Role> job_roles(const std::vector<PartyJob>& jobs) {
    std::vector<Role> roles;
    roles.reserve(jobs.size());
    for (const auto& j : jobs) roles.push_back(j.role);
    return roles;
}

}  // namespace

std::uint64_t party_stream(std::uint64_t session, Role role) {
    return mix64(session * 16 + static_cast<std::uint64_t>(role));
}

SessionStats drive_session(const RunOptions& opts, ProtocolId protocol,
                           const std::vector<PartyJob>& jobs) {
    std::unique_ptr<InprocHub> hub;
    std::map<Role, std::unique_ptr<TcpNode>> nodes;
    const std::vector<Role> roles = job_roles(jobs);

    std::function<Endpoint&(Role)> endpoint_of;
    if (opts.backend == Backend::Inproc) {
        hub = std::make_unique<InprocHub>();
        if (opts.observer) hub->set_observer(opts.observer);
        endpoint_of = [&](Role r) -> Endpoint& { return hub->endpoint(r); };
    } else {
        for (Role r : roles) {
            nodes[r] = std::make_unique<TcpNode>(r, opts.addresses);
        }
        endpoint_of = [&](Role r) -> Endpoint& { return *nodes.at(r); };
    }

    std::vector<std::exception_ptr> errors(jobs.size());
    std::vector<std::thread> threads;
    threads.reserve(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        threads.emplace_back([&, i] {
            const PartyJob& job = jobs[i];
            PartyCtx ctx;
            ctx.ep = &endpoint_of(job.role);
            ctx.session = opts.session;
            ctx.protocol = protocol;
            ctx.rng = RngStream(opts.seed, party_stream(opts.session, job.role));
            ctx.range = opts.range;
            ctx.verify = opts.verify;
            ctx.cond_bound = opts.cond_bound;
            if (opts.tamper.target != TamperSpec::Target::None && job.role == opts.tamper_party) {
                ctx.tamper = opts.tamper;
            }
            try {
                job.body(ctx);
            } catch (...) {
                errors[i] = std::current_exception();
                ctx.ep->abort_session(opts.session, static_cast<std::uint8_t>(protocol), roles);
            }
        });
    }
    for (auto& t : threads) t.join();

    // Peers that died on the abort notification are secondary; surface the
    // root cause.
    std::exception_ptr aborted;
    for (const auto& err : errors) {
        if (!err) continue;
        try {
            std::rethrow_exception(err);
        } catch (const ProtocolAborted&) {
            aborted = err;
        } catch (...) {
            std::rethrow_exception(err);
        }
    }
    if (aborted) std::rethrow_exception(aborted);

    if (opts.backend == Backend::Inproc) {
        return hub->ledger().session(opts.session);
    }
    Ledger merged;
    for (auto& [role, node] : nodes) {
        node->ledger().merge_into(merged);
    }
    return merged.session(opts.session);
}

ProtocolRun run_s2pm(const Matrix& a, const Matrix& b, const RunOptions& opts) {
    if (a.cols() != b.rows()) throw ShapeError("s2pm: a.cols must equal b.rows");
    const DimSpec dims{a.rows(), a.cols(), 1, b.cols()};
    SubShare out_a, out_b;
    ProtocolRun run;
    run.stats = drive_session(
        opts, ProtocolId::S2PM,
        {
            {Role::Alice,
             [&](PartyCtx& ctx) { out_a = s2pm_run(ctx, true, a, Role::Alice, Role::Bob); }},
            {Role::Bob,
             [&](PartyCtx& ctx) { out_b = s2pm_run(ctx, false, b, Role::Alice, Role::Bob); }},
            {Role::CommodityServer,
             [&](PartyCtx& ctx) { s2pm_serve_cs(ctx, dims, Role::Alice, Role::Bob); }},
        });
    run.shares = {out_a.share.V, out_b.share.V};
    run.sum = out_a.share.V + out_b.share.V;
    run.accepted = out_a.accepted && out_b.accepted;
    return run;
}

ProtocolRun run_s3pm(const Matrix& a, const Matrix& b, const Matrix& c, const RunOptions& opts) {
    if (a.cols() != b.rows() || b.cols() != c.rows()) {
        throw ShapeError("s3pm: chained dimensions disagree");
    }
    const DimSpec dims{a.rows(), a.cols(), b.cols(), c.cols()};
    const std::array<Role, 3> order = {Role::Alice, Role::Bob, Role::Carol};
    SubShare out_a, out_b, out_c;
    ProtocolRun run;
    run.stats = drive_session(
        opts, ProtocolId::S3PM,
        {
            {Role::Alice, [&](PartyCtx& ctx) { out_a = s3pm_run(ctx, 0, a, order); }},
            {Role::Bob, [&](PartyCtx& ctx) { out_b = s3pm_run(ctx, 1, b, order); }},
            {Role::Carol, [&](PartyCtx& ctx) { out_c = s3pm_run(ctx, 2, c, order); }},
            {Role::CommodityServer, [&](PartyCtx& ctx) { s3pm_serve_cs(ctx, dims, order); }},
        });
    run.shares = {out_a.share.V, out_b.share.V, out_c.share.V};
    run.sum = out_a.share.V + out_b.share.V + out_c.share.V;
    run.accepted = out_a.accepted && out_b.accepted && out_c.accepted;
    return run;
}

ProtocolRun run_s2pi(const Matrix& a, const Matrix& b, const RunOptions& opts) {
    if (!a.same_shape(b) || a.rows() != a.cols()) {
        throw ShapeError("s2pi: operands must be square with equal shape");
    }
    PartyResult out_a, out_b;
    ProtocolRun run;
    run.stats = drive_session(
        opts, ProtocolId::S2PI,
        {
            {Role::Alice, [&](PartyCtx& ctx) { out_a = s2pi_alice(ctx, a); }},
            {Role::Bob, [&](PartyCtx& ctx) { out_b = s2pi_bob(ctx, b); }},
            {Role::CommodityServer, [&](PartyCtx& ctx) { s2pi_serve_cs(ctx, a.rows()); }},
        });
    run.shares = {out_a.v, out_b.v};
    run.sum = out_a.v + out_b.v;
    run.accepted = out_a.accepted && out_b.accepted;
    return run;
}

ProtocolRun run_s2phm(const Matrix& a1, const Matrix& a2, const Matrix& b1, const Matrix& b2,
                      const RunOptions& opts) {
    if (!a1.same_shape(b1) || !a2.same_shape(b2) || a1.cols() != a2.rows()) {
        throw ShapeError("s2phm: operand shapes disagree");
    }
    const DimSpec dims{a1.rows(), a1.cols(), 1, a2.cols()};
    PartyResult out_a, out_b;
    ProtocolRun run;
    run.stats = drive_session(
        opts, ProtocolId::S2PHM,
        {
            {Role::Alice, [&](PartyCtx& ctx) { out_a = s2phm_alice(ctx, a1, a2); }},
            {Role::Bob, [&](PartyCtx& ctx) { out_b = s2phm_bob(ctx, b1, b2); }},
            {Role::CommodityServer, [&](PartyCtx& ctx) { s2phm_serve_cs(ctx, dims); }},
        });
    run.shares = {out_a.v, out_b.v};
    run.sum = out_a.v + out_b.v;
    run.accepted = out_a.accepted && out_b.accepted;
    return run;
}

ProtocolRun run_s3phm(const Matrix& a1, const Matrix& a2, const Matrix& b1, const Matrix& b2,
                      const Matrix& c, const RunOptions& opts) {
    if (!a1.same_shape(b1) || !a2.same_shape(b2) || a1.cols() != a2.rows() ||
        a2.cols() != c.rows()) {
        throw ShapeError("s3phm: operand shapes disagree");
    }
    const DimSpec dims{a1.rows(), a1.cols(), a2.cols(), c.cols()};
    PartyResult out_a, out_b, out_c;
    ProtocolRun run;
    run.stats = drive_session(
        opts, ProtocolId::S3PHM,
        {
            {Role::Alice, [&](PartyCtx& ctx) { out_a = s3phm_alice(ctx, a1, a2); }},
            {Role::Bob, [&](PartyCtx& ctx) { out_b = s3phm_bob(ctx, b1, b2); }},
            {Role::Carol, [&](PartyCtx& ctx) { out_c = s3phm_carol(ctx, c); }},
            {Role::CommodityServer, [&](PartyCtx& ctx) { s3phm_serve_cs(ctx, dims); }},
        });
    run.shares = {out_a.v, out_b.v, out_c.v};
    run.sum = out_a.v + out_b.v + out_c.v;
    run.accepted = out_a.accepted && out_b.accepted && out_c.accepted;
    return run;
}

}  // namespace eva
