#pragma once

#include <cstdint>
#include <vector>

#include "hmsim/addr.hpp"
#include "hmsim/trace.hpp"

namespace hmsim {

enum class L3EventKind : std::uint8_t { ReadMiss, WriteMiss, DirtyEviction, CleanEviction };

/// Event stream the L3 hands to the DRAM-cache controller. Evictions carry a
/// snapshot of the victim's DCP/DCD hint bits, its data token, and the PC
/// that installed it (used for write-predictor learning of bypassed lines).
struct L3Event {
    L3EventKind kind;
    LineAddr addr = 0;
    std::uint64_t pc = 0;
    bool dcp = false;
    bool dcd = false;
    bool was_bypassed = false;
    std::uint64_t payload = 0;
    std::uint64_t install_pc = 0;
};

/// Set-associative writeback L3 with LRU replacement. Each line additionally
/// tracks the DRAM-cache presence (DCP) and dirtiness (DCD) hint bits.
/// Misses leave one outstanding fill that must be completed via fill().
class LastLevelCache {
  public:
    LastLevelCache(std::uint64_t lines, std::uint32_t ways);

    /// Returns events in processing order: victim eviction first (if any),
    /// then the miss for the requested line. Hits return no events.
    std::vector<L3Event> access(const MemAccess& acc, std::uint64_t write_token);

    /// Completes the outstanding miss. present/dirty describe the DRAM-cache
    /// copy: dcp := present, dcd := present && dirty.
    void fill(LineAddr addr, bool present_in_l4, bool dirty_in_l4,
              std::uint64_t payload, bool was_bypassed);

    /// DRAM-cache eviction hook: the L4 copy is gone, so the hint bits for
    /// this address are stale and must drop.
    void clear_l4_hints(LineAddr addr);

    /// Drain step: invalidates lines in set/way order until the next dirty
    /// one, which is returned as an eviction event built from its current
    /// state (hint bits stay fresh while earlier drain evictions install).
    /// Returns false when the cache is empty.
    bool drain_next(L3Event& out);

    /// (addr, payload) of every resident dirty line; oracle overlay input.
    std::vector<std::pair<LineAddr, std::uint64_t>> dirty_contents() const;

    bool has_outstanding_miss() const { return pending_.active; }
    std::uint64_t hits() const { return hits_; }
    std::uint64_t misses() const { return misses_; }

    struct LineView {
        bool valid, dirty, dcp, dcd;
    };
    LineView peek(LineAddr addr) const;

  private:
    struct Line {
        std::uint64_t tag = 0;
        bool valid = false;
        bool dirty = false;
        bool dcp = false;
        bool dcd = false;
        bool was_bypassed = false;
        std::uint64_t payload = 0;
        std::uint64_t install_pc = 0;
        std::uint64_t lru = 0;
    };

    struct Pending {
        bool active = false;
        LineAddr addr = 0;
        std::uint64_t set = 0;
        std::uint32_t way = 0;
        bool is_write = false;
        std::uint64_t write_token = 0;
        std::uint64_t pc = 0;
    };

    Line* find(std::uint64_t set, std::uint64_t tag);
    const Line* find(std::uint64_t set, std::uint64_t tag) const;
    L3Event evict_event(const Line& victim, std::uint64_t set) const;

    std::uint64_t sets_;
    std::uint32_t ways_;
    std::vector<Line> lines_;
    std::uint64_t tick_ = 0;
    std::uint64_t hits_ = 0;
    std::uint64_t misses_ = 0;
    std::uint64_t drain_cursor_ = 0;
    Pending pending_;
};

}  // namespace hmsim
