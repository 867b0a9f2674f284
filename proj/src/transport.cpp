#include "eva/transport.hpp"

namespace eva {

void Endpoint::abort_session(std::uint64_t session, std::uint8_t protocol,
                             const std::vector<Role>& peers) {
    for (Role peer : peers) {
        if (peer == self()) continue;
        Envelope e;
        e.protocol = protocol;
        e.session = session;
        e.step = kAbortStep;
        e.sender = self();
        e.receiver = peer;
        e.matrices.push_back(Matrix(1, 1));
        try {
            send(std::move(e));
        } catch (const TransportError&) {
            // Peer already gone; nothing left to notify.
        }
    }
}

void Mailbox::push(Envelope e) {
    {
        std::lock_guard lock(mu_);
        queue_.push_back(std::move(e));
    }
    cv_.notify_all();
}

Envelope Mailbox::take(std::uint64_t session, std::uint16_t step, Role sender) {
    std::unique_lock lock(mu_);
    for (;;) {
        for (auto it = queue_.begin(); it != queue_.end(); ++it) {
            if (it->session == session && it->is_abort()) {
                throw ProtocolAborted("session aborted by " + std::string(role_name(it->sender)));
            }
            if (it->session == session && it->step == step && it->sender == sender) {
                Envelope e = std::move(*it);
                queue_.erase(it);
                return e;
            }
        }
        if (closed_) {
            throw TransportError("mailbox closed: " + close_reason_);
        }
        cv_.wait(lock);
    }
}

void Mailbox::close(const std::string& reason) {
    {
        std::lock_guard lock(mu_);
        closed_ = true;
        close_reason_ = reason;
    }
    cv_.notify_all();
}

void InprocEndpoint::send(Envelope e) {
    e.sender = self_;
    hub_.deliver(e);
}

Envelope InprocEndpoint::recv(std::uint64_t session, std::uint16_t step, Role sender) {
    return mailbox_.take(session, step, sender);
}

Ledger& InprocEndpoint::ledger() { return hub_.ledger_; }

InprocHub::InprocHub() {
    endpoints_.resize(5);
    for (std::uint8_t r = 0; r < 5; ++r) {
        endpoints_[r] = std::make_unique<InprocEndpoint>(*this, static_cast<Role>(r));
    }
}

InprocEndpoint& InprocHub::endpoint(Role r) {
    return *endpoints_[static_cast<std::uint8_t>(r)];
}

void InprocHub::set_observer(std::function<void(const Envelope&)> observer) {
    std::lock_guard lock(observer_mu_);
    observer_ = std::move(observer);
}

void InprocHub::deliver(const Envelope& e) {
    // Round-trip through the codec so in-process sessions exercise the
    // exact bytes a TCP session would carry.
    Envelope copy = decode(encode(e));
    ledger_.record(copy);
    {
        std::lock_guard lock(observer_mu_);
        if (observer_) observer_(copy);
    }
    endpoints_[static_cast<std::uint8_t>(copy.receiver)]->mailbox_.push(std::move(copy));
}

}  // namespace eva
