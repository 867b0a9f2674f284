#include "eva/envelope.hpp"

#include <cstring>

namespace eva {

namespace {

constexpr char kMagic[4] = {'E', 'V', 'A', 'S'};
constexpr std::size_t kFixedHeader = 4 + 1 + 1 + 8 + 2 + 1 + 1 + 1;
constexpr std::size_t kPerMatrixHeader = 8;

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
    }
}

template <typename T>
T get(const std::uint8_t* p) {
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        value |= static_cast<T>(p[i]) << (8 * i);
    }
    return value;
}

}  // namespace

const char* role_name(Role r) {
    switch (r) {
        case Role::Alice: return "alice";
        case Role::Bob: return "bob";
        case Role::Carol: return "carol";
        case Role::CommodityServer: return "cs";
        case Role::Client: return "client";
    }
    return "unknown";
}

std::size_t Envelope::payload_bytes() const {
    std::size_t total = 0;
    for (const auto& m : matrices) total += m.size() * sizeof(double);
    return total;
}

std::size_t Envelope::header_bytes() const {
    return kFixedHeader + matrices.size() * kPerMatrixHeader;
}

std::vector<std::uint8_t> encode(const Envelope& e) {
    if (e.matrices.size() > 255) {
        throw TransportError("envelope carries too many matrices");
    }
    std::vector<std::uint8_t> out;
    out.reserve(e.header_bytes() + e.payload_bytes());
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(e.version);
    out.push_back(e.protocol);
    put<std::uint64_t>(out, e.session);
    put<std::uint16_t>(out, e.step);
    out.push_back(static_cast<std::uint8_t>(e.sender));
    out.push_back(static_cast<std::uint8_t>(e.receiver));
    out.push_back(static_cast<std::uint8_t>(e.matrices.size()));
    for (const auto& m : e.matrices) {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(m.rows()));
        put<std::uint32_t>(out, static_cast<std::uint32_t>(m.cols()));
        const auto* bytes = reinterpret_cast<const std::uint8_t*>(m.data().data());
        out.insert(out.end(), bytes, bytes + m.size() * sizeof(double));
    }
    return out;
}

Envelope decode(const std::uint8_t* data, std::size_t len) {
    if (len < kFixedHeader || std::memcmp(data, kMagic, 4) != 0) {
        throw TransportError("bad envelope magic or truncated header");
    }
    Envelope e;
    std::size_t pos = 4;
    e.version = data[pos++];
    if (e.version != 1) throw TransportError("unsupported envelope version");
    e.protocol = data[pos++];
    e.session = get<std::uint64_t>(data + pos);
    pos += 8;
    e.step = get<std::uint16_t>(data + pos);
    pos += 2;
    const std::uint8_t sender = data[pos++];
    const std::uint8_t receiver = data[pos++];
    if (sender > 4 || receiver > 4) throw TransportError("bad role byte");
    e.sender = static_cast<Role>(sender);
    e.receiver = static_cast<Role>(receiver);
    const std::size_t count = data[pos++];
    e.matrices.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        if (pos + kPerMatrixHeader > len) throw TransportError("truncated matrix header");
        const auto rows = get<std::uint32_t>(data + pos);
        const auto cols = get<std::uint32_t>(data + pos + 4);
        pos += kPerMatrixHeader;
        const std::size_t n = static_cast<std::size_t>(rows) * cols;
        if (rows == 0 || cols == 0) throw TransportError("zero matrix dimension");
        if (pos + n * sizeof(double) > len) throw TransportError("truncated matrix payload");
        std::vector<double> values(n);
        std::memcpy(values.data(), data + pos, n * sizeof(double));
        pos += n * sizeof(double);
        try {
            e.matrices.emplace_back(rows, cols, std::move(values));
        } catch (const ShapeError& err) {
            throw TransportError(std::string("invalid matrix payload: ") + err.what());
        }
    }
    if (pos != len) throw TransportError("trailing bytes after envelope payload");
    return e;
}

Envelope decode(const std::vector<std::uint8_t>& bytes) {
    return decode(bytes.data(), bytes.size());
}

}  // namespace eva
