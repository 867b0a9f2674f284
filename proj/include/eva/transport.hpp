#pragma once

#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>

#include "eva/envelope.hpp"
#include "eva/ledger.hpp"

namespace eva {

/// One party's attachment to the message fabric. Sends are fire-and-forget;
/// receives block until the envelope matching (session, step, sender)
/// arrives, buffering anything that arrives out of order. An abort envelope
/// for the session wakes every pending receive with ProtocolAborted.
class Endpoint {
public:
    virtual ~Endpoint() = default;

    virtual void send(Envelope e) = 0;
    virtual Envelope recv(std::uint64_t session, std::uint16_t step, Role sender) = 0;
    virtual Role self() const = 0;
    virtual Ledger& ledger() = 0;

    /// Notify peers that this party abandoned the session.
    void abort_session(std::uint64_t session, std::uint8_t protocol,
                       const std::vector<Role>& peers);
};

/// Mailbox shared by the in-process backend and the TCP reader threads.
class Mailbox {
public:
    void push(Envelope e);
    Envelope take(std::uint64_t session, std::uint16_t step, Role sender);
    void close(const std::string& reason);

private:
    std::mutex mu_;
    std::condition_variable cv_;
    std::deque<Envelope> queue_;
    bool closed_ = false;
    std::string close_reason_;
};

class InprocHub;

/// Endpoint wired to an in-process hub.
class InprocEndpoint : public Endpoint {
public:
    InprocEndpoint(InprocHub& hub, Role self) : hub_(hub), self_(self) {}

    void send(Envelope e) override;
    Envelope recv(std::uint64_t session, std::uint16_t step, Role sender) override;
    Role self() const override { return self_; }
    Ledger& ledger() override;

private:
    friend class InprocHub;
    InprocHub& hub_;
    Role self_;
    Mailbox mailbox_;
};

/// All-roles-in-one-process fabric with a shared ledger. Delivery goes
/// through the wire codec so both backends exchange identical bytes.
class InprocHub {
public:
    InprocHub();

    InprocEndpoint& endpoint(Role r);
    Ledger& ledger() { return ledger_; }

    /// When set, every delivered envelope is also handed to the observer
    /// (used by transcript-based tests).
    void set_observer(std::function<void(const Envelope&)> observer);

private:
    friend class InprocEndpoint;
    void deliver(const Envelope& e);

    Ledger ledger_;
    std::function<void(const Envelope&)> observer_;
    std::mutex observer_mu_;
    std::vector<std::unique_ptr<InprocEndpoint>> endpoints_;
};

}  // namespace eva
