#include "eva/rng.hpp"

#include <cmath>
#include <numbers>

namespace eva {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), gen_(mix64(mix64(seed) ^ mix64(~stream_id))) {}

RngStream RngStream::derive(std::uint64_t salt) const {
    return RngStream(seed_, mix64(stream_id_ ^ mix64(salt)));
}

std::uint64_t RngStream::next_u64() { return gen_(); }

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

std::uint64_t RngStream::uniform_int(std::uint64_t bound) {
    // Rejection sampling over the top multiple of bound; unbiased.
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % bound;
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    double u, v, r;
    do {
        u = uniform01();
    } while (u <= 0.0);
    v = uniform01();
    r = std::sqrt(-2.0 * std::log(u));
    spare_normal_ = r * std::sin(2.0 * std::numbers::pi * v);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * v);
}

}  // namespace eva
