#pragma once

#include <cstdint>
#include <list>
#include <unordered_map>
#include <vector>

#include "hmsim/addr.hpp"

namespace hmsim {

/// Packed 1-byte out-of-line metadata entry: [7:2]=tag, [1]=dirty, [0]=valid.
struct TocEntry {
    std::uint8_t raw = 0;

    static TocEntry make(std::uint8_t tag6, bool dirty, bool valid) {
        TocEntry e;
        e.raw = static_cast<std::uint8_t>((tag6 & 0x3f) << 2) |
                static_cast<std::uint8_t>(dirty ? 2 : 0) |
                static_cast<std::uint8_t>(valid ? 1 : 0);
        return e;
    }
    std::uint8_t tag() const { return raw >> 2; }
    bool dirty() const { return raw & 2; }
    bool valid() const { return raw & 1; }
    void set_dirty(bool d) { raw = d ? (raw | 2) : (raw & ~2); }
};

/// The DRAM-resident metadata region: one TocEntry per cache set, grouped 64
/// per metadata line. Stored sparsely; untouched sets decode as invalid.
class TocStore {
  public:
    TocEntry get(std::uint64_t set_index) const {
        auto it = lines_.find(set_index / kSetsPerTocLine);
        if (it == lines_.end()) return TocEntry{};
        return it->second.e[set_index % kSetsPerTocLine];
    }
    void put(std::uint64_t set_index, TocEntry e) {
        lines_[set_index / kSetsPerTocLine].e[set_index % kSetsPerTocLine] = e;
    }

  private:
    struct Line {
        TocEntry e[kSetsPerTocLine];
    };
    std::unordered_map<std::uint64_t, Line> lines_;
};

/// What dirtied a cached metadata line; its eventual writeback is charged to
/// the purpose that first dirtied it.
enum class TocDirtier : std::uint8_t { None, TagUpdate, DirtyBitUpdate };

/// Fully associative LRU cache of metadata lines, write-back. Tracks cost
/// only: the metadata contents themselves live in the TocStore.
class MetadataCache {
  public:
    explicit MetadataCache(std::uint32_t entries) : capacity_(entries) {}

    /// True on hit (LRU refreshed). Misses are counted; the caller charges
    /// the DRAM read and then calls install().
    bool lookup(std::uint64_t line_id);

    /// Residency probe without touching LRU state or hit/miss counters.
    bool contains(std::uint64_t line_id) const {
        return map_.find(line_id) != map_.end();
    }

    struct Evicted {
        bool valid = false;
        std::uint64_t line_id = 0;
        bool was_dirty = false;
        TocDirtier dirtier = TocDirtier::None;
    };

    /// Installs a missing line, returning the LRU victim if one is pushed
    /// out. A dirty victim costs the caller one DRAM write transfer.
    Evicted install(std::uint64_t line_id);

    /// Marks a resident line dirty; remembers the first dirtying purpose.
    void mark_dirty(std::uint64_t line_id, TocDirtier why);

    /// Drops every entry, reporting dirty ones for writeback.
    std::vector<Evicted> drain();

    std::uint64_t lookups() const { return lookups_; }
    std::uint64_t misses() const { return misses_; }
    double miss_ratio() const {
        return lookups_ ? static_cast<double>(misses_) / static_cast<double>(lookups_) : 0.0;
    }
    std::size_t size() const { return map_.size(); }

  private:
    struct Slot {
        std::uint64_t line_id;
        bool dirty = false;
        TocDirtier dirtier = TocDirtier::None;
    };

    std::uint32_t capacity_;
    std::list<Slot> lru_;  // front = most recent
    std::unordered_map<std::uint64_t, std::list<Slot>::iterator> map_;
    std::uint64_t lookups_ = 0;
    std::uint64_t misses_ = 0;
};

}  // namespace hmsim
