#pragma once

#include <atomic>
#include <map>
#include <string>
#include <thread>

#include "eva/transport.hpp"

namespace eva {

struct NodeAddress {
    std::string host;
    std::uint16_t port = 0;
};

using AddressBook = std::map<Role, NodeAddress>;

/// One communicating node: binds its own address, accepts peer connections,
/// and lazily dials peers on first send. Frames are a 4-byte big-endian
/// length followed by one envelope. The node's ledger records what this
/// node sends; merge node ledgers to recover the full session picture.
class TcpNode : public Endpoint {
public:
    /// connect_attempts * 50ms bounds how long sends wait for peers that are
    /// still starting up.
    TcpNode(Role self, AddressBook book, int connect_attempts = 100);
    ~TcpNode() override;

    TcpNode(const TcpNode&) = delete;
    TcpNode& operator=(const TcpNode&) = delete;

    void send(Envelope e) override;
    Envelope recv(std::uint64_t session, std::uint16_t step, Role sender) override;
    Role self() const override { return self_; }
    Ledger& ledger() override { return ledger_; }

private:
    void accept_loop();
    void reader_loop(int fd);
    int peer_fd(Role peer);

    Role self_;
    AddressBook book_;
    int connect_attempts_;
    Ledger ledger_;
    Mailbox mailbox_;
    std::atomic<bool> stop_{false};
    int listen_fd_ = -1;
    std::thread accept_thread_;
    std::mutex conn_mu_;
    std::map<Role, int> out_fds_;
    std::map<Role, std::unique_ptr<std::mutex>> write_mu_;
    std::vector<std::thread> readers_;
    std::mutex readers_mu_;
};

}  // namespace eva
