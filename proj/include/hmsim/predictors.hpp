#pragma once

#include <array>
#include <cstdint>

#include "hmsim/rng.hpp"

namespace hmsim {

/// PC-indexed table of 2-bit saturating counters that routes accesses between
/// the in-line and out-of-line metadata paths. Counters start saturated at 3
/// (predict hit) so a cold cache behaves like the plain in-line baseline
/// until misses train it down.
class HitMissPredictor {
  public:
    static constexpr unsigned kEntries = 4096;
    static constexpr std::uint64_t kStorageBytes = kEntries * 2 / 8;  // 1KB

    HitMissPredictor() { counters_.fill(3); }

    bool predict_hit(std::uint64_t pc) const { return counters_[index(pc)] >= 2; }

    void train(std::uint64_t pc, bool actual_hit) {
        std::uint8_t& c = counters_[index(pc)];
        if (actual_hit) {
            if (c < 3) ++c;
        } else {
            if (c > 0) --c;
        }
    }

    std::uint8_t counter_for_test(std::uint64_t pc) const { return counters_[index(pc)]; }
    void set_counter_for_test(std::uint64_t pc, std::uint8_t v) { counters_[index(pc)] = v; }

  private:
    static std::size_t index(std::uint64_t pc) { return mix64(pc) & (kEntries - 1); }
    std::array<std::uint8_t, kEntries> counters_;
};

/// Signature-based write predictor: 512 direct-indexed entries of
/// {9-bit PC tag, 3-bit saturating counter}, trained by eviction outcomes of
/// sampled lines. Non-zero counter means the PC has installed lines that were
/// eventually written.
class WritePredictor {
  public:
    static constexpr unsigned kEntries = 512;
    static constexpr unsigned kCounterMax = 7;
    static constexpr std::uint64_t kStorageBytes = kEntries * (9 + 3) / 8;  // 768B

    WritePredictor() {
        for (auto& e : entries_) e = Entry{};
    }

    bool predict_write(std::uint64_t pc) const {
        const Entry& e = entries_[index(pc)];
        return e.tag == tag(pc) && e.counter > 0;
    }

    /// Eviction outcome of a sampled line installed by `pc`. A tag mismatch
    /// re-tags the entry and restarts its counter from 0.
    void learn(std::uint64_t pc, bool written) {
        Entry& e = entries_[index(pc)];
        if (e.tag != tag(pc)) {
            e.tag = tag(pc);
            e.counter = 0;
        }
        if (written) {
            if (e.counter < kCounterMax) ++e.counter;
        } else {
            if (e.counter > 0) --e.counter;
        }
    }

    std::uint8_t counter_for_test(std::uint64_t pc) const {
        const Entry& e = entries_[index(pc)];
        return e.tag == tag(pc) ? e.counter : 0;
    }

  private:
    struct Entry {
        std::uint16_t tag = 0x1ff;
        std::uint8_t counter = 0;  // 0 = no write behavior seen
    };

    static std::size_t index(std::uint64_t pc) { return mix64(pc) & (kEntries - 1); }
    static std::uint16_t tag(std::uint64_t pc) {
        return static_cast<std::uint16_t>((mix64(pc) >> 9) & 0x1ff);
    }

    std::array<Entry, kEntries> entries_;
};

/// 9-bit installing-PC signature stored with sampled lines.
inline std::uint16_t pc_signature(std::uint64_t pc) {
    return static_cast<std::uint16_t>(mix64(pc) & 0x1ff);
}

/// Whether a cache set is in the ~1% sample that records install signatures
/// and written-to bits. Pure function of set index and seed.
inline bool set_is_sampled(std::uint64_t set_index, std::uint64_t seed) {
    return mix64(set_index ^ mix64(seed)) < UINT64_MAX / 100;
}

}  // namespace hmsim
