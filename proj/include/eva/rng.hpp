#pragma once

#include <cstdint>
#include <random>

namespace eva {

/// Deterministic random stream: identical (seed, stream_id) pairs replay
/// identical draws, distinct stream ids are decorrelated. One stream per
/// logical party; never shared across threads.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Child stream independent of this one; deterministic in (this, salt).
    RngStream derive(std::uint64_t salt) const;

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 random bits (portable across platforms).
    double uniform01();

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);

    /// Uniform integer in [0, bound); bound must be nonzero.
    std::uint64_t uniform_int(std::uint64_t bound);

    /// Standard normal via Box-Muller.
    double normal();

    /// Fair coin.
    bool coin() { return (next_u64() >> 63) != 0; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 gen_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer; used to spread (seed, stream, salt) combinations.
std::uint64_t mix64(std::uint64_t x);

}  // namespace eva
