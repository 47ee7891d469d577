#pragma once

#include <cstdint>

#include "hmsim/config.hpp"

namespace hmsim {

/// Itemized SRAM cost of a configuration. Byte figures are exact structure
/// sizes; kb_total() rounds each component up to whole KB, which is how the
/// budgets are usually quoted (e.g. the 512x12b write predictor as 1KB).
struct StorageBudget {
    std::uint64_t sram_tag_bytes = 0;        // ideal tag-in-SRAM store
    std::uint64_t hm_predictor_bytes = 0;    // 4096 x 2-bit counters
    std::uint64_t metadata_cache_bytes = 0;  // entries x 64B
    std::uint64_t write_predictor_bytes = 0; // 512 x (9b tag + 3b counter)
    unsigned l3_bits_per_line = 0;           // DCP + DCD

    std::uint64_t byte_total() const {
        return sram_tag_bytes + hm_predictor_bytes + metadata_cache_bytes +
               write_predictor_bytes;
    }
    std::uint64_t kb_total() const;
};

StorageBudget storage_budget(const PolicyConfig& config);

}  // namespace hmsim
