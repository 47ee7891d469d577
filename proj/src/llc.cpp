#include "hmsim/llc.hpp"

#include <cassert>
#include <stdexcept>

namespace hmsim {

LastLevelCache::LastLevelCache(std::uint64_t lines, std::uint32_t ways)
    : sets_(lines / ways), ways_(ways), lines_(lines) {
    assert(ways > 0 && lines % ways == 0);
    assert((sets_ & (sets_ - 1)) == 0);
}

LastLevelCache::Line* LastLevelCache::find(std::uint64_t set, std::uint64_t tag) {
    Line* base = &lines_[set * ways_];
    for (std::uint32_t w = 0; w < ways_; ++w)
        if (base[w].valid && base[w].tag == tag) return &base[w];
    return nullptr;
}

const LastLevelCache::Line* LastLevelCache::find(std::uint64_t set,
                                                 std::uint64_t tag) const {
    const Line* base = &lines_[set * ways_];
    for (std::uint32_t w = 0; w < ways_; ++w)
        if (base[w].valid && base[w].tag == tag) return &base[w];
    return nullptr;
}

L3Event LastLevelCache::evict_event(const Line& victim, std::uint64_t set) const {
    L3Event e;
    e.kind = victim.dirty ? L3EventKind::DirtyEviction : L3EventKind::CleanEviction;
    e.addr = victim.tag * sets_ + set;
    e.dcp = victim.dcp;
    e.dcd = victim.dcd;
    e.was_bypassed = victim.was_bypassed;
    e.payload = victim.payload;
    e.install_pc = victim.install_pc;
    return e;
}

std::vector<L3Event> LastLevelCache::access(const MemAccess& acc,
                                            std::uint64_t write_token) {
    if (pending_.active)
        throw std::logic_error("l3: access while a miss is outstanding");
    ++tick_;
    std::uint64_t set = acc.addr & (sets_ - 1);
    std::uint64_t tag = acc.addr / sets_;

    if (Line* l = find(set, tag)) {
        ++hits_;
        l->lru = tick_;
        if (acc.is_write()) {
            l->dirty = true;
            l->payload = write_token;
        }
        return {};
    }

    ++misses_;
    Line* base = &lines_[set * ways_];
    std::uint32_t victim_way = 0;
    bool found_invalid = false;
    for (std::uint32_t w = 0; w < ways_; ++w) {
        if (!base[w].valid) {
            victim_way = w;
            found_invalid = true;
            break;
        }
        if (base[w].lru < base[victim_way].lru) victim_way = w;
    }

    std::vector<L3Event> events;
    if (!found_invalid) {
        events.push_back(evict_event(base[victim_way], set));
        base[victim_way].valid = false;
    }

    L3Event miss;
    miss.kind = acc.is_write() ? L3EventKind::WriteMiss : L3EventKind::ReadMiss;
    miss.addr = acc.addr;
    miss.pc = acc.pc;
    events.push_back(miss);

    pending_ = {true, acc.addr, set, victim_way, acc.is_write(), write_token, acc.pc};
    return events;
}

void LastLevelCache::fill(LineAddr addr, bool present_in_l4, bool dirty_in_l4,
                          std::uint64_t payload, bool was_bypassed) {
    if (!pending_.active || pending_.addr != addr)
        throw std::logic_error("l3: fill without matching outstanding miss");
    Line& l = lines_[pending_.set * ways_ + pending_.way];
    l.valid = true;
    l.tag = addr / sets_;
    l.dcp = present_in_l4;
    l.dcd = present_in_l4 && dirty_in_l4;
    l.was_bypassed = was_bypassed;
    l.install_pc = pending_.pc;
    l.lru = tick_;
    if (pending_.is_write) {
        l.dirty = true;
        l.payload = pending_.write_token;
    } else {
        l.dirty = false;
        l.payload = payload;
    }
    pending_.active = false;
}

void LastLevelCache::clear_l4_hints(LineAddr addr) {
    std::uint64_t set = addr & (sets_ - 1);
    if (Line* l = find(set, addr / sets_)) {
        l->dcp = false;
        l->dcd = false;
    }
}

bool LastLevelCache::drain_next(L3Event& out) {
    while (drain_cursor_ < lines_.size()) {
        Line& l = lines_[drain_cursor_];
        std::uint64_t set = drain_cursor_ / ways_;
        ++drain_cursor_;
        bool emit = l.valid && l.dirty;
        if (emit) out = evict_event(l, set);
        l.valid = false;
        if (emit) return true;
    }
    return false;
}

std::vector<std::pair<LineAddr, std::uint64_t>> LastLevelCache::dirty_contents() const {
    std::vector<std::pair<LineAddr, std::uint64_t>> out;
    for (std::uint64_t set = 0; set < sets_; ++set)
        for (std::uint32_t w = 0; w < ways_; ++w) {
            const Line& l = lines_[set * ways_ + w];
            if (l.valid && l.dirty) out.emplace_back(l.tag * sets_ + set, l.payload);
        }
    return out;
}

LastLevelCache::LineView LastLevelCache::peek(LineAddr addr) const {
    std::uint64_t set = addr & (sets_ - 1);
    if (const Line* l = find(set, addr / sets_))
        return {true, l->dirty, l->dcp, l->dcd};
    return {false, false, false, false};
}

}  // namespace hmsim
