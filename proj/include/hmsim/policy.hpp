#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "hmsim/addr.hpp"
#include "hmsim/config.hpp"
#include "hmsim/llc.hpp"
#include "hmsim/metadata.hpp"
#include "hmsim/predictors.hpp"
#include "hmsim/rng.hpp"

namespace hmsim {

enum class Category : std::uint8_t {
    XpointRead,
    XpointWrite,
    CacheHitRead,
    CacheWrite,
    Install,
    MissProbe,
    TocAccess,
    TocUpdate,
    DirtyBitUpdate,
};
constexpr unsigned kCategoryCount = 9;
const char* to_string(Category c);

enum class Device : std::uint8_t { Dram, Xpoint };

/// One 64B channel transfer.
struct TransferRecord {
    Category category;
    Device device;
    std::uint64_t row;  // line address (Xpoint) or set / metadata-line key (DRAM)
};

/// Transfer counts by category, with sub-counters that keep the different
/// purposes behind MissProbe / TocUpdate / DirtyBitUpdate recoverable.
struct BandwidthLedger {
    std::array<std::uint64_t, kCategoryCount> counts{};

    std::uint64_t miss_probe_confirms = 0;        // reads confirming a miss (incl. folded victim)
    std::uint64_t miss_probe_victim_reads = 0;    // separate dirty-victim reads
    std::uint64_t miss_probe_wasted_parallel = 0; // wrong-way parallel reads
    std::uint64_t toc_update_reads = 0;
    std::uint64_t toc_update_writebacks = 0;
    std::uint64_t toc_update_drain_writebacks = 0;
    std::uint64_t dirty_update_reads = 0;
    std::uint64_t dirty_update_writebacks = 0;

    std::uint64_t count(Category c) const { return counts[static_cast<unsigned>(c)]; }
    std::uint64_t total() const;
    std::uint64_t useful() const;       // XpointRead+XpointWrite+CacheHitRead+CacheWrite
    std::uint64_t installs() const { return count(Category::Install); }
    std::uint64_t maintenance() const;  // MissProbe+TocAccess+TocUpdate+DirtyBitUpdate
    double useful_fraction() const;
    std::uint64_t bytes() const { return total() * kLineBytes; }
};

/// Non-transfer policy event counts used by reports and tests.
struct PolicyCounters {
    std::uint64_t demand_accesses = 0;
    std::uint64_t l4_hits = 0;
    std::uint64_t l4_misses = 0;
    std::uint64_t install_opportunities = 0;
    std::uint64_t installs = 0;
    std::uint64_t bypassed_installs = 0;
    std::uint64_t dirty_evictions = 0;
    std::uint64_t resident_writebacks = 0;
    std::uint64_t nonresident_dirty_evictions = 0;
    std::uint64_t direct_memory_writes = 0;
    std::uint64_t dcd_skips = 0;
    std::uint64_t dirty_checks_already_dirty = 0;
    std::uint64_t clean_to_dirty_updates = 0;
    std::uint64_t hm_predictions = 0;
    std::uint64_t hm_correct = 0;
    std::uint64_t swp_predictions = 0;
    std::uint64_t swp_correct = 0;
};

/// Backing 3D-XPoint contents, payload tokens per line. Never-written lines
/// read as a deterministic function of their address.
class XpointMemory {
  public:
    static std::uint64_t default_token(LineAddr a) { return mix64(a ^ 0xd00dull); }

    std::uint64_t read(LineAddr a) const {
        auto it = m_.find(a);
        return it == m_.end() ? default_token(a) : it->second;
    }
    void write(LineAddr a, std::uint64_t v) { m_[a] = v; }

  private:
    std::unordered_map<LineAddr, std::uint64_t> m_;
};

/// What the L3 should record about the fetched line.
struct FillResult {
    bool present_in_l4 = false;
    bool dirty_in_l4 = false;  // dirty as known by the cache metadata (TOC view)
    std::uint64_t payload = 0;
    bool was_bypassed = false;
};

/// The DRAM-cache controller: consumes L3 events, maintains L4 + metadata
/// state, and charges every channel transfer with a category.
class CacheController {
  public:
    /// Called when the L4 evicts a line; lets the L3 drop stale DCP/DCD bits.
    using L4EvictHook = std::function<void(LineAddr)>;

    explicit CacheController(const PolicyConfig& config);

    void set_l4_evict_hook(L4EvictHook hook) { l4_evict_hook_ = std::move(hook); }
    /// Fault injection for oracle tests: writeback data is dropped on the floor.
    void drop_writebacks_for_test(bool on) { drop_writebacks_ = on; }
    /// Start counting write predictions against eventual outcomes.
    void set_swp_accuracy_tracking(bool on) { swp_tracking_ = on; }

    FillResult on_demand_miss(LineAddr addr, std::uint64_t pc, bool is_write);
    void on_dirty_eviction(const L3Event& e);
    void on_clean_eviction(const L3Event& e);
    void drain();

    const BandwidthLedger& ledger() const { return ledger_; }
    const PolicyCounters& counters() const { return counters_; }
    const XpointMemory& memory() const { return mem_; }
    const MetadataCache& metadata_cache() const { return mdc_; }
    const std::vector<TransferRecord>& transfer_log() const { return log_; }

    HitMissPredictor& hm_predictor() { return hm_; }
    WritePredictor& write_predictor() { return swp_; }

    double swp_accuracy() const {
        return counters_.swp_predictions
                   ? static_cast<double>(counters_.swp_correct) / counters_.swp_predictions
                   : 0.0;
    }

    /// (addr, payload) of every TIC-dirty L4 line, sorted; oracle overlay.
    std::vector<std::pair<LineAddr, std::uint64_t>> l4_dirty_contents() const;

    struct L4View {
        bool valid = false, tic_dirty = false, toc_valid = false, toc_dirty = false;
        std::uint64_t payload = 0;
    };
    L4View peek_set(std::uint64_t set) const;

    /// Checks TIC-dirty => TOC-dirty for every resident line. Throws on breach.
    void check_conservative_dirty() const;

  private:
    struct L4Line {
        bool valid = false;
        bool tic_dirty = false;
        std::uint64_t tic_tag = 0;
        std::uint64_t payload = 0;
    };
    struct SampledMeta {
        std::uint64_t install_pc = 0;  // 9-bit signature in hardware
        bool written = false;
    };
    struct InstallOutcome {
        bool installed = false;
        bool toc_dirty = false;
    };

    void charge(Category c, Device d, std::uint64_t row);
    void charge_probe_confirm(std::uint64_t set);
    void charge_victim_read(std::uint64_t set);
    void charge_wasted_parallel(Device d, std::uint64_t row);

    /// Metadata-line access on the update path. Charges `read_cat` on a
    /// metadata-cache miss, installing the line (and flushing a dirty
    /// victim). Returns true if it was already cached. `group_fetched` means
    /// the current operation already looked this line up.
    bool mdc_fetch_for_update(std::uint64_t toc_id, Category read_cat,
                              bool group_fetched = false);
    void flush_mdc_victim(const MetadataCache::Evicted& ev);

    InstallOutcome maybe_install(LineAddr addr, std::uint64_t pc, bool incoming_dirty,
                                 std::uint64_t payload, bool victim_preread,
                                 bool toc_group_fetched = false);
    void evict_l4_line(std::uint64_t set, const L4Line& victim, bool victim_preread);
    void resolve_swp_outcome(std::uint64_t set, bool written);

    FillResult demand_ideal(LineAddr addr, std::uint64_t pc);
    FillResult demand_tic(LineAddr addr, std::uint64_t pc);
    FillResult demand_toc(LineAddr addr, std::uint64_t pc);
    FillResult demand_tictoc(LineAddr addr, std::uint64_t pc);

    bool sampled(std::uint64_t set) const {
        return set_is_sampled(set, config_.rng_seed);
    }

    PolicyConfig config_;
    BandwidthLedger ledger_;
    PolicyCounters counters_;
    XpointMemory mem_;
    MetadataCache mdc_;
    TocStore toc_;
    HitMissPredictor hm_;
    WritePredictor swp_;
    Rng bypass_rng_;
    std::unordered_map<std::uint64_t, L4Line> l4_;
    std::unordered_map<std::uint64_t, SampledMeta> sampled_meta_;
    std::unordered_map<std::uint64_t, bool> swp_pending_;  // set -> predicted write
    std::vector<TransferRecord> log_;
    L4EvictHook l4_evict_hook_;
    bool drop_writebacks_ = false;
    bool swp_tracking_ = false;
};

}  // namespace hmsim
