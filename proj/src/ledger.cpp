#include "eva/ledger.hpp"

namespace eva {

void SessionStats::merge(const SessionStats& o) {
    for (const auto& [key, stats] : o.pairs) pairs[key].add(stats);
    total.add(o.total);
    preprocess.add(o.preprocess);
    online.add(o.online);
    verify.add(o.verify);
}

bool operator==(const DirectedStats& a, const DirectedStats& b) {
    return a.payload_bytes == b.payload_bytes && a.header_bytes == b.header_bytes &&
           a.messages == b.messages;
}

bool operator==(const SessionStats& a, const SessionStats& b) {
    return a.pairs == b.pairs && a.total == b.total && a.preprocess == b.preprocess &&
           a.online == b.online && a.verify == b.verify;
}

void Ledger::record(const Envelope& e) {
    const DirectedStats d{e.payload_bytes(), e.header_bytes(), 1};
    std::lock_guard lock(mu_);
    SessionStats& s = sessions_[e.session];
    s.pairs[{e.sender, e.receiver}].add(d);
    s.total.add(d);
    if (e.sender == Role::CommodityServer) {
        s.preprocess.add(d);
    } else {
        s.online.add(d);
    }
}

SessionStats Ledger::session(std::uint64_t id) const {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? SessionStats{} : it->second;
}

void Ledger::merge_into(Ledger& target) const {
    if (&target == this) return;
    std::lock_guard lock(mu_);
    std::lock_guard lock2(target.mu_);
    for (const auto& [id, stats] : sessions_) {
        target.sessions_[id].merge(stats);
    }
}

}  // namespace eva
