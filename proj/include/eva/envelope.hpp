#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eva/matrix.hpp"

namespace eva {

enum class Role : std::uint8_t {
    Alice = 0,
    Bob = 1,
    Carol = 2,
    CommodityServer = 3,
    Client = 4,
};

const char* role_name(Role r);

enum class ProtocolId : std::uint8_t {
    CsBundle = 0,
    S2PM = 1,
    S3PM = 2,
    S2PI = 3,
    S2PHM = 4,
    S3PHM = 5,
    S3PLRT = 6,
    S3PLRP = 7,
};

/// Step id reserved for abort notifications.
inline constexpr std::uint16_t kAbortStep = 0xFFFF;

/// One directed protocol message. Wire layout (little-endian scalars):
///   magic "EVAS" | version u8 | protocol u8 | session u64 | step u16 |
///   sender u8 | receiver u8 | matrix-count u8 |
///   per matrix: rows u32 | cols u32 | rows*cols f64 row-major
struct Envelope {
    std::uint8_t version = 1;
    std::uint8_t protocol = 0;
    std::uint64_t session = 0;
    std::uint16_t step = 0;
    Role sender = Role::Alice;
    Role receiver = Role::Alice;
    std::vector<Matrix> matrices;

    /// f64 payload bytes, excluding headers and dimension fields.
    std::size_t payload_bytes() const;

    /// Fixed header plus per-matrix dimension fields.
    std::size_t header_bytes() const;

    bool is_abort() const { return step == kAbortStep; }
};

std::vector<std::uint8_t> encode(const Envelope& e);

/// Decodes a full frame; throws TransportError on any malformed input.
Envelope decode(const std::uint8_t* data, std::size_t len);
Envelope decode(const std::vector<std::uint8_t>& bytes);

}  // namespace eva
