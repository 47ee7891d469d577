#include "hmsim/policy.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace hmsim {

const char* to_string(Category c) {
    switch (c) {
        case Category::XpointRead: return "xpoint_read";
        case Category::XpointWrite: return "xpoint_write";
        case Category::CacheHitRead: return "cache_hit_read";
        case Category::CacheWrite: return "cache_write";
        case Category::Install: return "install";
        case Category::MissProbe: return "miss_probe";
        case Category::TocAccess: return "toc_access";
        case Category::TocUpdate: return "toc_update";
        case Category::DirtyBitUpdate: return "dirty_bit_update";
    }
    return "?";
}

std::uint64_t BandwidthLedger::total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
}

std::uint64_t BandwidthLedger::useful() const {
    return count(Category::XpointRead) + count(Category::XpointWrite) +
           count(Category::CacheHitRead) + count(Category::CacheWrite);
}

std::uint64_t BandwidthLedger::maintenance() const {
    return count(Category::MissProbe) + count(Category::TocAccess) +
           count(Category::TocUpdate) + count(Category::DirtyBitUpdate);
}

double BandwidthLedger::useful_fraction() const {
    std::uint64_t t = total();
    return t ? static_cast<double>(useful()) / static_cast<double>(t) : 1.0;
}

CacheController::CacheController(const PolicyConfig& config)
    : config_(config),
      mdc_(config.metadata_cache_entries),
      bypass_rng_(mix64(config.rng_seed ^ 0xb7a55ull)) {
    config_.validate();
    if (config_.has_toc() &&
        config_.geometry.memory_lines / config_.geometry.cache_lines > kSetsPerTocLine)
        throw ConfigError("toc organizations need memory/cache ratio <= 64 "
                          "(6-bit tags would alias)");
}

void CacheController::charge(Category c, Device d, std::uint64_t row) {
    ledger_.counts[static_cast<unsigned>(c)]++;
    log_.push_back({c, d, row});
}

void CacheController::charge_probe_confirm(std::uint64_t set) {
    charge(Category::MissProbe, Device::Dram, set);
    ledger_.miss_probe_confirms++;
}

void CacheController::charge_victim_read(std::uint64_t set) {
    charge(Category::MissProbe, Device::Dram, set);
    ledger_.miss_probe_victim_reads++;
}

void CacheController::charge_wasted_parallel(Device d, std::uint64_t row) {
    charge(Category::MissProbe, d, row);
    ledger_.miss_probe_wasted_parallel++;
}

void CacheController::flush_mdc_victim(const MetadataCache::Evicted& ev) {
    if (!ev.valid || !ev.was_dirty) return;
    if (ev.dirtier == TocDirtier::DirtyBitUpdate) {
        charge(Category::DirtyBitUpdate, Device::Dram, ev.line_id);
        ledger_.dirty_update_writebacks++;
    } else {
        charge(Category::TocUpdate, Device::Dram, ev.line_id);
        ledger_.toc_update_writebacks++;
    }
}

bool CacheController::mdc_fetch_for_update(std::uint64_t toc_id, Category read_cat,
                                           bool group_fetched) {
    // The demand path may have fetched this metadata line already; the update
    // then rides the same access instead of a second lookup.
    if (group_fetched) {
        assert(mdc_.contains(toc_id));
        return true;
    }
    if (mdc_.lookup(toc_id)) return true;
    charge(read_cat, Device::Dram, toc_id);
    if (read_cat == Category::TocUpdate)
        ledger_.toc_update_reads++;
    else
        ledger_.dirty_update_reads++;
    flush_mdc_victim(mdc_.install(toc_id));
    return false;
}

void CacheController::resolve_swp_outcome(std::uint64_t set, bool written) {
    auto it = swp_pending_.find(set);
    if (it == swp_pending_.end()) return;
    counters_.swp_predictions++;
    if (it->second == written) counters_.swp_correct++;
    swp_pending_.erase(it);
}

void CacheController::evict_l4_line(std::uint64_t set, const L4Line& victim,
                                    bool victim_preread) {
    LineAddr victim_addr = line_from_set_and_tag(set, victim.tic_tag, config_.geometry);

    bool metadata_says_dirty;
    if (config_.has_toc()) {
        TocEntry e = toc_.get(set);
        metadata_says_dirty = e.valid() && e.dirty();
    } else {
        metadata_says_dirty = victim.tic_dirty;
    }
    assert(!(victim.tic_dirty && !metadata_says_dirty));

    // A dirty-per-metadata victim must be read before it can be replaced,
    // unless the miss path already returned it (in-line tag organizations).
    if (metadata_says_dirty && !victim_preread) charge_victim_read(set);
    if (victim.tic_dirty) {
        charge(Category::XpointWrite, Device::Xpoint, victim_addr);
        if (!drop_writebacks_) mem_.write(victim_addr, victim.payload);
    }

    if (config_.uses_write_predictor() && sampled(set)) {
        auto it = sampled_meta_.find(set);
        if (it != sampled_meta_.end()) {
            swp_.learn(it->second.install_pc, it->second.written);
            sampled_meta_.erase(it);
        }
    }
    resolve_swp_outcome(set, victim.tic_dirty);
    if (l4_evict_hook_) l4_evict_hook_(victim_addr);
}

CacheController::InstallOutcome CacheController::maybe_install(LineAddr addr,
                                                               std::uint64_t pc,
                                                               bool incoming_dirty,
                                                               std::uint64_t payload,
                                                               bool victim_preread,
                                                               bool toc_group_fetched) {
    counters_.install_opportunities++;

    bool install = true;
    if (config_.bypass != BypassMode::None) {
        install = bypass_rng_.chance_per_mille(100);  // keep 10% of installs
        if (config_.bypass == BypassMode::WriteAllocate ||
            config_.bypass == BypassMode::PreemptiveWriteAllocate)
            install = install || incoming_dirty;
        if (config_.bypass == BypassMode::PreemptiveWriteAllocate)
            install = install || swp_.predict_write(pc);
    }

    if (!install) {
        counters_.bypassed_installs++;
        if (incoming_dirty) {
            charge(Category::XpointWrite, Device::Xpoint, addr);
            counters_.direct_memory_writes++;
            if (!drop_writebacks_) mem_.write(addr, payload);
        }
        return {false, false};
    }

    std::uint64_t set = cache_index(addr, config_.geometry);
    L4Line& line = l4_[set];
    if (line.valid) evict_l4_line(set, line, victim_preread);

    charge(Category::Install, Device::Dram, set);
    counters_.installs++;

    bool pdm_mark = config_.pdm_enabled && !incoming_dirty && swp_.predict_write(pc);
    bool toc_dirty = incoming_dirty || pdm_mark;

    line.valid = true;
    line.tic_tag = tic_tag_of(addr, config_.geometry);
    line.tic_dirty = incoming_dirty;
    line.payload = payload;

    if (config_.has_toc()) {
        std::uint64_t toc_id = toc_line_of(set).line;
        mdc_fetch_for_update(toc_id, Category::TocUpdate, toc_group_fetched);
        toc_.put(set, TocEntry::make(toc_tag_of(addr, config_.geometry), toc_dirty, true));
        mdc_.mark_dirty(toc_id, TocDirtier::TagUpdate);
    }

    if (config_.uses_write_predictor()) {
        if (sampled(set)) sampled_meta_[set] = {pc, incoming_dirty};
        if (swp_tracking_ && !incoming_dirty) swp_pending_[set] = swp_.predict_write(pc);
    }
    return {true, toc_dirty};
}

FillResult CacheController::demand_ideal(LineAddr addr, std::uint64_t pc) {
    (void)pc;
    std::uint64_t set = cache_index(addr, config_.geometry);
    std::uint64_t tag = tic_tag_of(addr, config_.geometry);
    auto it = l4_.find(set);
    if (it != l4_.end() && it->second.valid && it->second.tic_tag == tag) {
        counters_.l4_hits++;
        charge(Category::CacheHitRead, Device::Dram, set);
        return {true, it->second.tic_dirty, it->second.payload, false};
    }
    counters_.l4_misses++;
    charge(Category::XpointRead, Device::Xpoint, addr);
    std::uint64_t payload = mem_.read(addr);
    InstallOutcome out = maybe_install(addr, pc, false, payload, false);
    return {out.installed, out.toc_dirty, payload, !out.installed};
}

FillResult CacheController::demand_tic(LineAddr addr, std::uint64_t pc) {
    std::uint64_t set = cache_index(addr, config_.geometry);
    std::uint64_t tag = tic_tag_of(addr, config_.geometry);
    auto it = l4_.find(set);
    bool actual_hit = it != l4_.end() && it->second.valid && it->second.tic_tag == tag;
    bool pred_hit = hm_.predict_hit(pc);
    hm_.train(pc, actual_hit);
    counters_.hm_predictions++;
    if (pred_hit == actual_hit) counters_.hm_correct++;

    if (actual_hit) {
        counters_.l4_hits++;
        charge(Category::CacheHitRead, Device::Dram, set);  // tag+data in one access
        if (!pred_hit) charge_wasted_parallel(Device::Xpoint, addr);
        return {true, it->second.tic_dirty, it->second.payload, false};
    }
    counters_.l4_misses++;
    // The read that confirms the miss also returns the victim line, so no
    // separate victim read is ever needed.
    charge_probe_confirm(set);
    charge(Category::XpointRead, Device::Xpoint, addr);
    std::uint64_t payload = mem_.read(addr);
    InstallOutcome out = maybe_install(addr, pc, false, payload, true);
    return {out.installed, false, payload, !out.installed};
}

FillResult CacheController::demand_toc(LineAddr addr, std::uint64_t pc) {
    std::uint64_t set = cache_index(addr, config_.geometry);
    std::uint64_t toc_id = toc_line_of(set).line;
    bool pred_hit = hm_.predict_hit(pc);

    bool mdc_hit = mdc_.lookup(toc_id);
    if (!mdc_hit) {
        charge(Category::TocAccess, Device::Dram, toc_id);
        flush_mdc_victim(mdc_.install(toc_id));
    }
    TocEntry e = toc_.get(set);
    bool actual_hit = e.valid() && e.tag() == toc_tag_of(addr, config_.geometry);
    hm_.train(pc, actual_hit);
    counters_.hm_predictions++;
    if (pred_hit == actual_hit) counters_.hm_correct++;

    if (actual_hit) {
        counters_.l4_hits++;
        charge(Category::CacheHitRead, Device::Dram, set);
        // On a metadata miss the hit/miss predictor launched memory in
        // parallel with the metadata fetch; that read was wasted.
        if (!mdc_hit && !pred_hit) charge_wasted_parallel(Device::Xpoint, addr);
        auto it = l4_.find(set);
        assert(it != l4_.end() && it->second.valid);
        return {true, e.dirty(), it->second.payload, false};
    }

    counters_.l4_misses++;
    charge(Category::XpointRead, Device::Xpoint, addr);
    bool victim_preread = false;
    if (!mdc_hit && pred_hit) {
        // Predicted hit reads metadata + cache data in parallel; on an actual
        // miss that data read returned the victim line.
        charge_wasted_parallel(Device::Dram, set);
        victim_preread = true;
    }
    std::uint64_t payload = mem_.read(addr);
    InstallOutcome out = maybe_install(addr, pc, false, payload, victim_preread, true);
    return {out.installed, out.toc_dirty, payload, !out.installed};
}

FillResult CacheController::demand_tictoc(LineAddr addr, std::uint64_t pc) {
    std::uint64_t set = cache_index(addr, config_.geometry);
    std::uint64_t tag = tic_tag_of(addr, config_.geometry);
    bool pred_hit = hm_.predict_hit(pc);
    counters_.hm_predictions++;

    if (pred_hit) {
        // TIC path: one read returns tag and data.
        auto it = l4_.find(set);
        bool actual_hit = it != l4_.end() && it->second.valid && it->second.tic_tag == tag;
        hm_.train(pc, actual_hit);
        if (actual_hit) {
            counters_.l4_hits++;
            counters_.hm_correct++;
            charge(Category::CacheHitRead, Device::Dram, set);
            return {true, it->second.tic_dirty, it->second.payload, false};
        }
        counters_.l4_misses++;
        charge_probe_confirm(set);  // failed hit read; returned the victim
        charge(Category::XpointRead, Device::Xpoint, addr);
        std::uint64_t payload = mem_.read(addr);
        InstallOutcome out = maybe_install(addr, pc, false, payload, true);
        return {out.installed, out.toc_dirty, payload, !out.installed};
    }

    // TOC path: metadata decides residency without touching the data line.
    std::uint64_t toc_id = toc_line_of(set).line;
    bool mdc_hit = mdc_.lookup(toc_id);
    if (!mdc_hit) {
        charge(Category::TocAccess, Device::Dram, toc_id);
        flush_mdc_victim(mdc_.install(toc_id));
    }
    TocEntry e = toc_.get(set);
    bool actual_hit = e.valid() && e.tag() == toc_tag_of(addr, config_.geometry);
    hm_.train(pc, actual_hit);
    if (actual_hit) {
        counters_.l4_hits++;
        charge(Category::CacheHitRead, Device::Dram, set);
        if (!mdc_hit) charge_wasted_parallel(Device::Xpoint, addr);
        auto it = l4_.find(set);
        assert(it != l4_.end() && it->second.valid && it->second.tic_tag == tag);
        return {true, e.dirty(), it->second.payload, false};
    }
    counters_.l4_misses++;
    counters_.hm_correct++;
    charge(Category::XpointRead, Device::Xpoint, addr);
    std::uint64_t payload = mem_.read(addr);
    InstallOutcome out = maybe_install(addr, pc, false, payload, false, true);
    return {out.installed, out.toc_dirty, payload, !out.installed};
}

FillResult CacheController::on_demand_miss(LineAddr addr, std::uint64_t pc, bool is_write) {
    (void)is_write;
    counters_.demand_accesses++;
    switch (config_.organization) {
        case Organization::NoCache:
            charge(Category::XpointRead, Device::Xpoint, addr);
            return {false, false, mem_.read(addr), false};
        case Organization::IdealSram: return demand_ideal(addr, pc);
        case Organization::Tic: return demand_tic(addr, pc);
        case Organization::Toc: return demand_toc(addr, pc);
        case Organization::TicToc: return demand_tictoc(addr, pc);
    }
    return {};
}

void CacheController::on_dirty_eviction(const L3Event& e) {
    counters_.dirty_evictions++;

    if (config_.organization == Organization::NoCache) {
        charge(Category::XpointWrite, Device::Xpoint, e.addr);
        if (!drop_writebacks_) mem_.write(e.addr, e.payload);
        return;
    }

    std::uint64_t set = cache_index(e.addr, config_.geometry);
    std::uint64_t tag = tic_tag_of(e.addr, config_.geometry);

    // Bypassed lines never reached L4; their eviction outcome is the only
    // chance for the write predictor to observe them.
    if (e.was_bypassed && config_.uses_write_predictor() && sampled(set))
        swp_.learn(e.install_pc, true);

    bool resident;
    bool victim_preread = false;
    bool group_fetched = false;  // metadata line consulted by this operation
    auto it = l4_.find(set);
    bool tags_match = it != l4_.end() && it->second.valid && it->second.tic_tag == tag;

    if (e.dcp) {
        assert(tags_match);
        resident = true;
    } else {
        switch (config_.organization) {
            case Organization::IdealSram:
                resident = tags_match;
                break;
            case Organization::Tic:
                charge_probe_confirm(set);  // tag check reads the resident line
                resident = tags_match;
                victim_preread = true;
                break;
            case Organization::Toc: {
                std::uint64_t toc_id = toc_line_of(set).line;
                if (!mdc_.lookup(toc_id)) {
                    charge(Category::TocAccess, Device::Dram, toc_id);
                    flush_mdc_victim(mdc_.install(toc_id));
                }
                group_fetched = true;
                TocEntry te = toc_.get(set);
                resident = te.valid() && te.tag() == toc_tag_of(e.addr, config_.geometry);
                break;
            }
            case Organization::TicToc: {
                std::uint64_t toc_id = toc_line_of(set).line;
                if (mdc_.contains(toc_id)) {
                    // cached metadata answers the tag check for free
                    TocEntry te = toc_.get(set);
                    resident = te.valid() && te.tag() == toc_tag_of(e.addr, config_.geometry);
                } else {
                    charge_probe_confirm(set);
                    resident = tags_match;
                    victim_preread = true;
                }
                break;
            }
            default:
                resident = false;
        }
        assert(resident == tags_match);
    }

    if (!resident) {
        counters_.nonresident_dirty_evictions++;
        maybe_install(e.addr, e.install_pc, true, e.payload, victim_preread,
                      group_fetched);
        return;
    }

    counters_.resident_writebacks++;
    charge(Category::CacheWrite, Device::Dram, set);
    L4Line& line = it->second;
    if (!drop_writebacks_) line.payload = e.payload;
    line.tic_dirty = true;

    if (config_.uses_write_predictor() && sampled(set)) {
        auto mit = sampled_meta_.find(set);
        if (mit != sampled_meta_.end()) mit->second.written = true;
    }

    if (!config_.has_toc()) return;  // in-line dirty bit rides with the data write

    if (config_.dcd_enabled && e.dcd) {
        counters_.dcd_skips++;  // known resident and already dirty in TOC
        return;
    }

    std::uint64_t toc_id = toc_line_of(set).line;
    mdc_fetch_for_update(toc_id, Category::DirtyBitUpdate, group_fetched);
    TocEntry cur = toc_.get(set);
    if (!cur.dirty()) {
        cur.set_dirty(true);
        toc_.put(set, cur);
        mdc_.mark_dirty(toc_id, TocDirtier::DirtyBitUpdate);
        counters_.clean_to_dirty_updates++;
    } else {
        counters_.dirty_checks_already_dirty++;
    }
}

void CacheController::on_clean_eviction(const L3Event& e) {
    if (config_.organization == Organization::NoCache) return;
    std::uint64_t set = cache_index(e.addr, config_.geometry);
    if (e.was_bypassed && config_.uses_write_predictor() && sampled(set))
        swp_.learn(e.install_pc, false);
}

void CacheController::drain() {
    // L4 dirty lines to memory. Flushing is charged as the memory write
    // alone, like the normal victim path's writeback.
    std::vector<std::uint64_t> sets;
    sets.reserve(l4_.size());
    for (const auto& [set, line] : l4_)
        if (line.valid && line.tic_dirty) sets.push_back(set);
    std::sort(sets.begin(), sets.end());
    for (std::uint64_t set : sets) {
        L4Line& line = l4_[set];
        LineAddr addr = line_from_set_and_tag(set, line.tic_tag, config_.geometry);
        charge(Category::XpointWrite, Device::Xpoint, addr);
        if (!drop_writebacks_) mem_.write(addr, line.payload);
        line.tic_dirty = false;
    }
    for (auto& [set, pred] : swp_pending_) {
        (void)pred;
        counters_.swp_predictions++;
        auto it = l4_.find(set);
        bool written = it != l4_.end() && it->second.valid && sets.end() !=
                       std::find(sets.begin(), sets.end(), set);
        if (pred == written) counters_.swp_correct++;
    }
    swp_pending_.clear();

    for (const auto& ev : mdc_.drain()) {
        charge(Category::TocUpdate, Device::Dram, ev.line_id);
        ledger_.toc_update_drain_writebacks++;
    }
}

std::vector<std::pair<LineAddr, std::uint64_t>> CacheController::l4_dirty_contents() const {
    std::vector<std::pair<LineAddr, std::uint64_t>> out;
    for (const auto& [set, line] : l4_)
        if (line.valid && line.tic_dirty)
            out.emplace_back(line_from_set_and_tag(set, line.tic_tag, config_.geometry),
                             line.payload);
    std::sort(out.begin(), out.end());
    return out;
}

CacheController::L4View CacheController::peek_set(std::uint64_t set) const {
    L4View v;
    auto it = l4_.find(set);
    if (it != l4_.end() && it->second.valid) {
        v.valid = true;
        v.tic_dirty = it->second.tic_dirty;
        v.payload = it->second.payload;
    }
    TocEntry e = toc_.get(set);
    v.toc_valid = e.valid();
    v.toc_dirty = e.valid() && e.dirty();
    return v;
}

void CacheController::check_conservative_dirty() const {
    if (!config_.has_toc()) return;
    for (const auto& [set, line] : l4_) {
        if (!line.valid || !line.tic_dirty) continue;
        TocEntry e = toc_.get(set);
        if (!e.valid() || !e.dirty())
            throw std::logic_error("conservative-dirty breach at set " + std::to_string(set));
    }
}

}  // namespace hmsim
