#pragma once

#include <string>

#include "eva/regression.hpp"

namespace eva {

enum class ProtocolKind { S2PM, S3PM, S2PI, S2PHM, S3PHM };

const char* protocol_name(ProtocolKind kind);
ProtocolKind protocol_from_name(const std::string& name);

/// Operands plus the plaintext reference result for one honest trial.
struct TrialCase {
    std::vector<Matrix> operands;
    Matrix expected;
};

/// Random operands at the given dimension and dynamic range. S2PI pairs are
/// built from a conditioned sum so the inverse stays meaningful.
TrialCase make_trial(ProtocolKind kind, std::size_t n, DynamicRange delta, RngStream& rng,
                     double cond_bound = 1e4);

/// Non-square variant; protocols use the chain prefix they need (S2PM and
/// S2PHM read n, s, m; S3PM and S3PHM the full chain; S2PI requires square).
TrialCase make_trial(ProtocolKind kind, const DimSpec& dims, DynamicRange delta, RngStream& rng,
                     double cond_bound = 1e4);

ProtocolRun run_protocol(ProtocolKind kind, const TrialCase& trial, const RunOptions& opts);

/// Max-norm relative error of the reconstructed result: the per-trial figure
/// behind the precision sweeps.
double trial_error(const ProtocolRun& run, const TrialCase& trial);

struct PrecisionCell {
    std::size_t n = 0;
    int delta = 0;
    std::size_t trials = 0;
    double mre = 0.0;         // worst max-norm relative error across trials
    double worst_frob = 0.0;  // worst relative Frobenius error across trials
    double failure_rate = 0.0;  // trials with error above 1e-3
};

inline constexpr double kFailureThreshold = 1e-3;

PrecisionCell precision_cell(ProtocolKind kind, std::size_t n, int delta, std::size_t trials,
                             std::uint64_t seed, std::size_t verify_rounds = 20);

struct TamperReport {
    std::size_t trials = 0;
    std::size_t detected = 0;
    double rate = 0.0;
    double wilson_low = 0.0;  // 99% lower confidence bound on the rate
};

/// Injects one computation fault per trial into a randomly chosen share or
/// verification share of a random party (and sub-protocol) and counts
/// verification rejections.
TamperReport tamper_sweep(ProtocolKind kind, std::size_t n, int delta, std::size_t trials,
                          std::size_t verify_rounds, std::uint64_t seed);

/// Honest runs only; returns the number of (false) rejections.
std::size_t completeness_rejections(ProtocolKind kind, std::size_t n, int delta,
                                    std::size_t trials, std::size_t verify_rounds,
                                    std::uint64_t seed);

struct AuditRow {
    std::string protocol;
    std::uint64_t rounds = 0;
    std::uint64_t rounds_expected = 0;
    std::uint64_t payload = 0;
    std::uint64_t payload_expected = 0;
    bool pass = false;
};

/// Ledger-vs-closed-form audit for the five elementary protocols at square
/// dimension n, plus the round counts of the two regression protocols.
std::vector<AuditRow> comm_audit(std::size_t n, std::uint64_t seed);

double wilson_lower_bound(std::size_t successes, std::size_t trials, double z = 2.576);

}  // namespace eva
