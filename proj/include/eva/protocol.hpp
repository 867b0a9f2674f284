#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "eva/preprocess.hpp"
#include "eva/transport.hpp"

namespace eva {

/// One party's output of an elementary protocol: additive result share V,
/// verification share VF, and the standard matrix St. Honest runs satisfy
/// sum(VF) - St = sum(V) - true product = 0.
struct Share {
    Matrix V;
    Matrix VF;
    Matrix St;
};

struct VerifyConfig {
    std::size_t rounds = 20;    // Freivalds repetitions per party
    double epsilon_rel = 1e-6;  // zero tolerance relative to operand norms
    bool enabled = true;        // disabled only for timing-isolation runs
};

/// Fault injection for soundness tests. The fault lands at the computation
/// site of the chosen quantity inside the sub_index'th elementary
/// sub-protocol this party runs, and propagates downstream like a real
/// computation error, which is what the verification phase is built to
/// catch. scale_factor 0 injects nothing.
struct TamperSpec {
    enum class Target { None, ShareV, ShareVF };
    Target target = Target::None;
    std::uint32_t sub_index = 0;
    double scale_factor = 0.0;
    std::uint64_t element_seed = 0;
};

/// Everything one party needs to play its side of a session.
struct PartyCtx {
    Endpoint* ep = nullptr;
    std::uint64_t session = 0;
    ProtocolId protocol = ProtocolId::S2PM;
    std::uint16_t step_base = 0;
    RngStream rng{0, 0};
    DynamicRange range{4};
    VerifyConfig verify;
    double cond_bound = 1e3;  // for the S2PI congruence factors
    TamperSpec tamper;
    std::uint32_t sub_counter = 0;
};

/// One party's view of one elementary sub-protocol after online + verify.
struct SubShare {
    Share share;
    std::vector<Matrix> peer_vfs;
    bool accepted = true;
};

/// Result share of a composed protocol at one party.
struct PartyResult {
    Matrix v;
    bool accepted = true;
};

/// Freivalds check: l rounds of (sum of VF - St) * random 0/1 vector, zero
/// under a tolerance scaled by the operand norms. Pure local computation.
bool freivalds_accept(const Share& own, const std::vector<Matrix>& peer_vfs,
                      const VerifyConfig& cfg, RngStream& rng);

// --- S2PM -----------------------------------------------------------------
// step_base+0  CS    -> left   (R_a, r_a, St)
// step_base+1  CS    -> right  (R_b, r_b, St)
// step_base+2  left  -> right  A + R_a
// step_base+3  right -> left   B + R_b
// step_base+4  right -> left   (VF_b, T)
// step_base+5  left  -> right  VF_a
inline constexpr std::uint16_t kS2pmSteps = 6;

SubShare s2pm_run(PartyCtx& ctx, bool is_left, const Matrix& operand, Role left, Role right);

/// Ceilings are magnitude bounds for the two operands, derived from public
/// workload parameters; 0 means "at the configured dynamic range".
void s2pm_serve_cs(PartyCtx& ctx, const DimSpec& dims, Role left, Role right,
                   double left_ceiling = 0.0, double right_ceiling = 0.0);

// --- S3PM -----------------------------------------------------------------
// step_base+0   CS -> p1  (R_a, r_a, St)
// step_base+1   CS -> p2  (R_b, r_b, St)
// step_base+2   CS -> p3  (R_c, r_c, St)
// step_base+3   p1 -> p2  A + R_a
// step_base+4   p3 -> p2  C + R_c
// step_base+5   p2 -> p3  (psi1, gamma1)
// step_base+6   p2 -> p1  (psi2, gamma2)
// step_base+7   p2 -> p1  B1
// step_base+8   p2 -> p3  B2
// step_base+9   p1 -> p2  (T_a, VF_a)
// step_base+10  p1 -> p3  (t1, VF_a)
// step_base+11  p2 -> p1  VF_b
// step_base+12  p2 -> p3  (T_b, VF_b)
// step_base+13  p3 -> p1  VF_c
// step_base+14  p3 -> p2  VF_c
inline constexpr std::uint16_t kS3pmSteps = 15;

SubShare s3pm_run(PartyCtx& ctx, int position, const Matrix& operand,
                  const std::array<Role, 3>& parties);
void s3pm_serve_cs(PartyCtx& ctx, const DimSpec& dims, const std::array<Role, 3>& parties,
                   const std::array<double, 3>& ceilings = {0.0, 0.0, 0.0});

// --- S2PI: three S2PM calls plus one bridge message -------------------------
// sub 0 at +0:  (P*A) x Q      sub 1 at +6:  P x (B*Q)
// step_base+12: Alice -> Bob   V_a
// sub 2 at +13: (Q*T^-1) x P with Bob on the left
inline constexpr std::uint16_t kS2piSteps = 19;

PartyResult s2pi_alice(PartyCtx& ctx, const Matrix& a);
PartyResult s2pi_bob(PartyCtx& ctx, const Matrix& b);
void s2pi_serve_cs(PartyCtx& ctx, std::size_t n, double operand_ceiling = 0.0);

// --- S2PHM: two S2PM calls ---------------------------------------------------
// sub 0 at +0: A1 x B2         sub 1 at +6: B1 x A2 (Bob on the left)
inline constexpr std::uint16_t kS2phmSteps = 12;

PartyResult s2phm_alice(PartyCtx& ctx, const Matrix& a1, const Matrix& a2);
PartyResult s2phm_bob(PartyCtx& ctx, const Matrix& b1, const Matrix& b2);
void s2phm_serve_cs(PartyCtx& ctx, const DimSpec& dims,
                    const std::array<double, 2>& ceilings = {0.0, 0.0});

// --- S3PHM: two S2PM calls and two S3PM calls --------------------------------
// sub 0 at +0:  (A1*A2) x C    sub 1 at +6:  (B1*B2) x C
// sub 2 at +12: A1 x B2 x C    sub 3 at +27: B1 x A2 x C
inline constexpr std::uint16_t kS3phmSteps = 42;

PartyResult s3phm_alice(PartyCtx& ctx, const Matrix& a1, const Matrix& a2);
PartyResult s3phm_bob(PartyCtx& ctx, const Matrix& b1, const Matrix& b2);
PartyResult s3phm_carol(PartyCtx& ctx, const Matrix& c);
void s3phm_serve_cs(PartyCtx& ctx, const DimSpec& dims,
                    const std::array<double, 3>& ceilings = {0.0, 0.0, 0.0});

}  // namespace eva
