#pragma once

#include <cstdint>

namespace hmsim {

/// Index of a 64-byte line (byte address >> 6).
using LineAddr = std::uint64_t;

constexpr unsigned kLineBytes = 64;
constexpr unsigned kSetsPerTocLine = 64;

/// Sizes of the backing memory, the DRAM cache, and its metadata region,
/// all in 64B lines. Defaults: 64GB memory, 4GB cache, 64MB metadata.
struct CacheGeometry {
    std::uint64_t memory_lines = 1ull << 30;
    std::uint64_t cache_lines = 1ull << 26;
    std::uint64_t metadata_region_lines = 1ull << 20;

    bool valid() const {
        if (cache_lines == 0 || (cache_lines & (cache_lines - 1)) != 0)
            return false;
        if (metadata_region_lines * kSetsPerTocLine < cache_lines)
            return false;
        return memory_lines >= cache_lines;
    }
};

/// Direct-mapped set index for a line address.
inline std::uint64_t cache_index(LineAddr addr, const CacheGeometry& geom) {
    return addr & (geom.cache_lines - 1);
}

struct TocCoord {
    std::uint64_t line;  // metadata-line id
    unsigned slot;       // 0..63
};

/// Which metadata line covers a set, and the slot within it.
/// Adjacent sets share a metadata line (64 per line).
inline TocCoord toc_line_of(std::uint64_t set_index) {
    return {set_index / kSetsPerTocLine,
            static_cast<unsigned>(set_index % kSetsPerTocLine)};
}

/// Full tag for in-line metadata (width not enforced; rides in ECC bits).
inline std::uint64_t tic_tag_of(LineAddr addr, const CacheGeometry& geom) {
    return addr / geom.cache_lines;
}

/// 6-bit truncated tag for out-of-line metadata entries.
inline std::uint8_t toc_tag_of(LineAddr addr, const CacheGeometry& geom) {
    return static_cast<std::uint8_t>((addr / geom.cache_lines) & 0x3f);
}

inline LineAddr line_from_set_and_tag(std::uint64_t set_index, std::uint64_t tic_tag,
                                      const CacheGeometry& geom) {
    return tic_tag * geom.cache_lines + set_index;
}

}  // namespace hmsim
