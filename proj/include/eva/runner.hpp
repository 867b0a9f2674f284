#pragma once

#include <functional>
#include <map>

#include "eva/protocol.hpp"
#include "eva/tcp_transport.hpp"

namespace eva {

enum class Backend { Inproc, Tcp };

struct RunOptions {
    std::uint64_t seed = 1;
    std::uint64_t session = 1;
    DynamicRange range{4};
    VerifyConfig verify{};
    double cond_bound = 1e3;

    TamperSpec tamper{};
    Role tamper_party = Role::Alice;

    Backend backend = Backend::Inproc;
    AddressBook addresses;  // required for the TCP backend

    /// Observes every delivered envelope (in-process backend only).
    std::function<void(const Envelope&)> observer;
};

/// Outcome of one full in-process (or loopback TCP) session.
struct ProtocolRun {
    std::vector<Matrix> shares;  // V per party, protocol role order
    Matrix sum;                  // reconstructed result
    bool accepted = true;        // all parties accepted all sub-verifications
    SessionStats stats;
};

ProtocolRun run_s2pm(const Matrix& a, const Matrix& b, const RunOptions& opts);
ProtocolRun run_s3pm(const Matrix& a, const Matrix& b, const Matrix& c, const RunOptions& opts);
ProtocolRun run_s2pi(const Matrix& a, const Matrix& b, const RunOptions& opts);
ProtocolRun run_s2phm(const Matrix& a1, const Matrix& a2, const Matrix& b1, const Matrix& b2,
                      const RunOptions& opts);
ProtocolRun run_s3phm(const Matrix& a1, const Matrix& a2, const Matrix& b1, const Matrix& b2,
                      const Matrix& c, const RunOptions& opts);

/// Per-party stream id; every party derives its draws from (seed, this).
std::uint64_t party_stream(std::uint64_t session, Role role);

/// Generic driver: runs one job per role on its own thread, propagating the
/// first real failure after notifying peers. Used by the protocol runners
/// above and by the regression module.
struct PartyJob {
    Role role;
    std::function<void(PartyCtx&)> body;
};

SessionStats drive_session(const RunOptions& opts, ProtocolId protocol,
                           const std::vector<PartyJob>& jobs);

}  // namespace eva
