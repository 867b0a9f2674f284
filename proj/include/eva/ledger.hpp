#pragma once

#include <cstdint>
#include <map>
#include <mutex>

#include "eva/envelope.hpp"

namespace eva {

struct DirectedStats {
    std::uint64_t payload_bytes = 0;
    std::uint64_t header_bytes = 0;
    std::uint64_t messages = 0;

    void add(const DirectedStats& o) {
        payload_bytes += o.payload_bytes;
        header_bytes += o.header_bytes;
        messages += o.messages;
    }
};

/// Cumulative communication accounting for one session. Rounds equal the
/// number of envelopes sent; the preprocess slice is exactly the commodity
/// server's deliveries, and verification exchanges no messages.
struct SessionStats {
    std::map<std::pair<Role, Role>, DirectedStats> pairs;
    DirectedStats total;
    DirectedStats preprocess;
    DirectedStats online;
    DirectedStats verify;

    std::uint64_t rounds() const { return total.messages; }
    std::uint64_t payload_bytes() const { return total.payload_bytes; }

    void merge(const SessionStats& o);
};

bool operator==(const DirectedStats& a, const DirectedStats& b);
bool operator==(const SessionStats& a, const SessionStats& b);

/// Thread-safe per-session counters, updated atomically on every send.
class Ledger {
public:
    void record(const Envelope& e);

    /// Stats for one session; zeros when the session never sent anything.
    SessionStats session(std::uint64_t id) const;

    void merge_into(Ledger& target) const;

private:
    mutable std::mutex mu_;
    std::map<std::uint64_t, SessionStats> sessions_;
};

}  // namespace eva
