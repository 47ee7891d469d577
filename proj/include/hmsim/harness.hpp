#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hmsim/channel.hpp"
#include "hmsim/config.hpp"
#include "hmsim/llc.hpp"
#include "hmsim/policy.hpp"
#include "hmsim/trace.hpp"

namespace hmsim {

/// Flat reference memory: last written token per line. Replayed from the
/// trace alone, independent of any cache policy.
class OracleMemory {
  public:
    /// Records a write and returns its payload token.
    std::uint64_t record_write(LineAddr addr) {
        std::uint64_t token = mix64(addr ^ mix64(++write_seq_));
        m_[addr] = token;
        return token;
    }
    bool contains(LineAddr addr) const { return m_.find(addr) != m_.end(); }
    std::uint64_t expected(LineAddr addr) const { return m_.at(addr); }
    const std::unordered_map<LineAddr, std::uint64_t>& contents() const { return m_; }

  private:
    std::uint64_t write_seq_ = 0;
    std::unordered_map<LineAddr, std::uint64_t> m_;
};

enum class OracleVerdict { Pass, Fail, NotChecked };

struct RunStats {
    std::string run_id;
    PolicyConfig config;
    std::uint64_t accesses = 0;
    std::uint64_t l3_hits = 0;
    std::uint64_t l3_misses = 0;
    BandwidthLedger ledger;
    PolicyCounters policy;
    double rho = 0.0;
    std::uint64_t mdc_lookups = 0;
    std::uint64_t mdc_misses = 0;
    double swp_accuracy = 0.0;
    ChannelStats channel;
    OracleVerdict verdict = OracleVerdict::NotChecked;
    LineAddr first_divergence = 0;

    double useful_fraction() const { return ledger.useful_fraction(); }
};

struct RunOptions {
    bool check_oracle = true;
    bool run_channel = true;
    bool fault_drop_writebacks = false;  // test hook: corrupt the policy
    double swp_warmup_fraction = 0.10;
};

/// One full llc -> policy -> channel pipeline over a trace.
class Simulation {
  public:
    Simulation(const PolicyConfig& config, RunOptions options = {});

    /// Trace length, if known up front; drives the write-predictor
    /// accuracy warmup cutoff.
    void set_expected_accesses(std::uint64_t n) { expected_accesses_ = n; }

    void step(const MemAccess& acc);
    /// Drains all levels, checks the oracle, assembles stats.
    RunStats finish();

    /// Throws if XPoint overlaid with L4- and L3-dirty lines disagrees with
    /// the oracle; legal to call any time before finish().
    void check_effective_memory() const;

    CacheController& controller() { return ctrl_; }
    LastLevelCache& llc() { return llc_; }
    const OracleMemory& oracle() const { return oracle_; }

  private:
    void dispatch(const L3Event& e);

    PolicyConfig config_;
    RunOptions options_;
    LastLevelCache llc_;
    CacheController ctrl_;
    OracleMemory oracle_;
    std::uint64_t accesses_ = 0;
    std::uint64_t expected_accesses_ = 0;
    bool tracking_enabled_ = false;
};

RunStats run_trace(const PolicyConfig& config, const std::vector<MemAccess>& trace,
                   RunOptions options = {}, const std::string& run_id = "run0");

struct ExperimentPlan {
    struct Entry {
        PolicyConfig config;
        std::optional<TraceSpec> spec;       // generate, or
        std::optional<std::string> trace_file;  // load
        std::string run_id;
    };
    std::vector<Entry> entries;
};

std::vector<RunStats> run_plan(const ExperimentPlan& plan, RunOptions options = {});

/// Same trace and policy replayed against both channel topologies.
struct ModeComparison {
    ChannelStats shared;
    ChannelStats dedicated;
};
ModeComparison compare_modes(const PolicyConfig& config, const std::vector<MemAccess>& trace);

/// One run per metadata-cache size, same seed and trace.
std::vector<RunStats> sweep_mdc_size(const PolicyConfig& config,
                                     const std::vector<MemAccess>& trace,
                                     const std::vector<std::uint32_t>& sizes,
                                     RunOptions options = {});

/// Conformance micro-suite: per-operation transfer costs of the cost model
/// (single-event scenarios driven straight into the controller).
struct ConformanceCheck {
    std::string name;
    bool pass;
    std::string detail;
};
std::vector<ConformanceCheck> run_conformance_suite();

/// Report emission. CSV column order is fixed; identical runs produce
/// byte-identical files.
std::string report_csv(const std::vector<RunStats>& stats);
std::string report_json(const std::vector<RunStats>& stats);
void emit_report(const std::vector<RunStats>& stats, const std::string& format,
                 const std::string& path);

}  // namespace hmsim
