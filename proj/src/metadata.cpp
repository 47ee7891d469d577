#include "hmsim/metadata.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace hmsim {

bool MetadataCache::lookup(std::uint64_t line_id) {
    ++lookups_;
    auto it = map_.find(line_id);
    if (it == map_.end()) {
        ++misses_;
        return false;
    }
    lru_.splice(lru_.begin(), lru_, it->second);
    return true;
}

MetadataCache::Evicted MetadataCache::install(std::uint64_t line_id) {
    if (map_.count(line_id))
        throw std::logic_error("metadata cache: duplicate install");
    Evicted out;
    if (map_.size() >= capacity_) {
        Slot& victim = lru_.back();
        out.valid = true;
        out.line_id = victim.line_id;
        out.was_dirty = victim.dirty;
        out.dirtier = victim.dirtier;
        map_.erase(victim.line_id);
        lru_.pop_back();
    }
    lru_.push_front(Slot{line_id});
    map_[line_id] = lru_.begin();
    return out;
}

void MetadataCache::mark_dirty(std::uint64_t line_id, TocDirtier why) {
    auto it = map_.find(line_id);
    if (it == map_.end())
        throw std::logic_error("metadata cache: mark_dirty on absent line");
    Slot& s = *it->second;
    if (!s.dirty) {
        s.dirty = true;
        s.dirtier = why;
    }
}

std::vector<MetadataCache::Evicted> MetadataCache::drain() {
    std::vector<Evicted> out;
    for (const Slot& s : lru_)
        if (s.dirty) out.push_back({true, s.line_id, true, s.dirtier});
    lru_.clear();
    map_.clear();
    std::sort(out.begin(), out.end(),
              [](const Evicted& a, const Evicted& b) { return a.line_id < b.line_id; });
    return out;
}

}  // namespace hmsim
