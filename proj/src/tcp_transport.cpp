#include "eva/tcp_transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstring>

namespace eva {

namespace {

constexpr int kPollMs = 50;

void close_quiet(int fd) {
    if (fd >= 0) ::close(fd);
}

// Reads exactly len bytes; false on orderly shutdown, throws on error.
bool read_exact(int fd, std::uint8_t* buf, std::size_t len, const std::atomic<bool>& stop) {
    std::size_t got = 0;
    while (got < len) {
        pollfd p{fd, POLLIN, 0};
        const int rc = ::poll(&p, 1, kPollMs);
        if (stop.load()) return false;
        if (rc == 0) continue;
        if (rc < 0) throw TransportError("poll failed");
        const ssize_t n = ::read(fd, buf + got, len - got);
        if (n == 0) return false;
        if (n < 0) {
            if (errno == EINTR || errno == EAGAIN) continue;
            throw TransportError(std::string("read failed: ") + std::strerror(errno));
        }
        got += static_cast<std::size_t>(n);
    }
    return true;
}

void write_all(int fd, const std::uint8_t* buf, std::size_t len) {
    std::size_t sent = 0;
    while (sent < len) {
        const ssize_t n = ::write(fd, buf + sent, len - sent);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw TransportError(std::string("write failed: ") + std::strerror(errno));
        }
        sent += static_cast<std::size_t>(n);
    }
}

}  // namespace

TcpNode::TcpNode(Role self, AddressBook book, int connect_attempts)
    : self_(self), book_(std::move(book)), connect_attempts_(connect_attempts) {
    const auto it = book_.find(self_);
    if (it == book_.end()) {
        throw TransportError("no bind address for role " + std::string(role_name(self_)));
    }
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw TransportError("socket() failed");
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(it->second.port);
    if (::inet_pton(AF_INET, it->second.host.c_str(), &addr.sin_addr) != 1) {
        hostent* he = ::gethostbyname(it->second.host.c_str());
        if (!he) throw TransportError("cannot resolve " + it->second.host);
        std::memcpy(&addr.sin_addr, he->h_addr, sizeof(addr.sin_addr));
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
        close_quiet(listen_fd_);
        throw TransportError("bind failed on " + it->second.host + ":" +
                             std::to_string(it->second.port));
    }
    if (::listen(listen_fd_, 8) < 0) {
        close_quiet(listen_fd_);
        throw TransportError("listen failed");
    }
    accept_thread_ = std::thread([this] { accept_loop(); });
}

TcpNode::~TcpNode() {
    stop_.store(true);
    mailbox_.close("node shut down");
    if (accept_thread_.joinable()) accept_thread_.join();
    {
        std::lock_guard lock(conn_mu_);
        for (auto& [role, fd] : out_fds_) close_quiet(fd);
        out_fds_.clear();
    }
    {
        std::lock_guard lock(readers_mu_);
        for (auto& t : readers_) {
            if (t.joinable()) t.join();
        }
    }
    close_quiet(listen_fd_);
}

void TcpNode::accept_loop() {
    while (!stop_.load()) {
        pollfd p{listen_fd_, POLLIN, 0};
        const int rc = ::poll(&p, 1, kPollMs);
        if (rc <= 0) continue;
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) continue;
        int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        std::lock_guard lock(readers_mu_);
        readers_.emplace_back([this, fd] { reader_loop(fd); });
    }
}

void TcpNode::reader_loop(int fd) {
    try {
        for (;;) {
            std::uint8_t len_be[4];
            if (!read_exact(fd, len_be, 4, stop_)) break;
            const std::uint32_t len = (std::uint32_t(len_be[0]) << 24) |
                                      (std::uint32_t(len_be[1]) << 16) |
                                      (std::uint32_t(len_be[2]) << 8) | std::uint32_t(len_be[3]);
            if (len == 0 || len > (1u << 30)) throw TransportError("bad frame length");
            std::vector<std::uint8_t> frame(len);
            if (!read_exact(fd, frame.data(), len, stop_)) break;
            mailbox_.push(decode(frame));
        }
    } catch (const std::exception& e) {
        if (!stop_.load()) mailbox_.close(e.what());
    }
    close_quiet(fd);
}

int TcpNode::peer_fd(Role peer) {
    std::lock_guard lock(conn_mu_);
    auto it = out_fds_.find(peer);
    if (it != out_fds_.end()) return it->second;

    const auto addr_it = book_.find(peer);
    if (addr_it == book_.end()) {
        throw TransportError("no address for role " + std::string(role_name(peer)));
    }
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(addr_it->second.port);
    if (::inet_pton(AF_INET, addr_it->second.host.c_str(), &addr.sin_addr) != 1) {
        hostent* he = ::gethostbyname(addr_it->second.host.c_str());
        if (!he) throw TransportError("cannot resolve " + addr_it->second.host);
        std::memcpy(&addr.sin_addr, he->h_addr, sizeof(addr.sin_addr));
    }
    // The peer may still be starting up; retry with a short backoff.
    for (int attempt = 0; attempt < connect_attempts_; ++attempt) {
        const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd < 0) throw TransportError("socket() failed");
        if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0) {
            int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
            out_fds_[peer] = fd;
            write_mu_[peer] = std::make_unique<std::mutex>();
            return fd;
        }
        close_quiet(fd);
        std::this_thread::sleep_for(std::chrono::milliseconds(kPollMs));
    }
    throw TransportError("cannot connect to " + std::string(role_name(peer)));
}

void TcpNode::send(Envelope e) {
    e.sender = self_;
    try {
        const int fd = peer_fd(e.receiver);
        const auto bytes = encode(e);
        const std::uint32_t len = static_cast<std::uint32_t>(bytes.size());
        const std::uint8_t len_be[4] = {
            static_cast<std::uint8_t>(len >> 24), static_cast<std::uint8_t>(len >> 16),
            static_cast<std::uint8_t>(len >> 8), static_cast<std::uint8_t>(len)};
        std::mutex* mu;
        {
            std::lock_guard lock(conn_mu_);
            mu = write_mu_.at(e.receiver).get();
        }
        std::lock_guard lock(*mu);
        write_all(fd, len_be, 4);
        write_all(fd, bytes.data(), bytes.size());
    } catch (const TransportError& err) {
        throw TransportError("session " + std::to_string(e.session) + " step " +
                             std::to_string(e.step) + " to " + role_name(e.receiver) + ": " +
                             err.what());
    }
    ledger_.record(e);
}

Envelope TcpNode::recv(std::uint64_t session, std::uint16_t step, Role sender) {
    return mailbox_.take(session, step, sender);
}

}  // namespace eva
