#include "hmsim/storage.hpp"

#include "hmsim/predictors.hpp"

namespace hmsim {

namespace {
std::uint64_t ceil_kb(std::uint64_t bytes) { return (bytes + 1023) / 1024; }
}

std::uint64_t StorageBudget::kb_total() const {
    std::uint64_t kb = 0;
    if (sram_tag_bytes) kb += ceil_kb(sram_tag_bytes);
    if (hm_predictor_bytes) kb += ceil_kb(hm_predictor_bytes);
    if (metadata_cache_bytes) kb += ceil_kb(metadata_cache_bytes);
    if (write_predictor_bytes) kb += ceil_kb(write_predictor_bytes);
    return kb;
}

StorageBudget storage_budget(const PolicyConfig& config) {
    StorageBudget b;
    switch (config.organization) {
        case Organization::NoCache:
            break;
        case Organization::IdealSram:
            // 1 byte of tag+state per cache line, all in SRAM.
            b.sram_tag_bytes = config.geometry.cache_lines;
            break;
        case Organization::Tic:
            b.hm_predictor_bytes = HitMissPredictor::kStorageBytes;
            b.l3_bits_per_line = 1;  // DCP
            break;
        case Organization::Toc:
            b.hm_predictor_bytes = HitMissPredictor::kStorageBytes;
            b.metadata_cache_bytes = std::uint64_t(config.metadata_cache_entries) * kLineBytes;
            b.l3_bits_per_line = 1;  // DCP
            break;
        case Organization::TicToc:
            b.hm_predictor_bytes = HitMissPredictor::kStorageBytes;
            b.metadata_cache_bytes = std::uint64_t(config.metadata_cache_entries) * kLineBytes;
            b.write_predictor_bytes = WritePredictor::kStorageBytes;
            b.l3_bits_per_line = 2;  // DCP + DCD
            break;
    }
    return b;
}

}  // namespace hmsim
