#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hmsim/addr.hpp"

namespace hmsim {

enum class AccessKind : std::uint8_t { Read, Write };

/// One traced memory reference as seen below the on-chip hierarchy.
struct MemAccess {
    std::uint64_t pc = 0;
    LineAddr addr = 0;
    AccessKind kind = AccessKind::Read;

    bool is_write() const { return kind == AccessKind::Write; }
    bool operator==(const MemAccess&) const = default;
};

enum class TracePattern { Stream, PageLocal, WriteOnce, WriteRepeat, PointerChase, Mix };

const char* to_string(TracePattern p);
TracePattern pattern_from_string(const std::string& s);

/// Synthetic workload description. Patterns:
///   Stream       sequential walk over the footprint
///   PageLocal    page-aligned bursts of `locality_span` consecutive lines
///   WriteOnce    permuted single visit per line; written lines written once
///   WriteRepeat  hot set of `locality_span` lines re-dirtied against a
///                streaming read background
///   PointerChase uniform random lines, no locality
///   Mix          interleaved bursts of the above behaviors
///
/// write_fraction selects the fraction of *lines* with write behavior, so a
/// PC either always installs eventually-written lines or never does.
struct TraceSpec {
    TracePattern pattern = TracePattern::Mix;
    std::uint64_t footprint_lines = 1 << 16;
    std::uint64_t access_count = 100000;
    double write_fraction = 0.25;
    std::uint64_t locality_span = 64;
    std::uint64_t seed = 1;

    void validate() const;
};

class TraceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Deterministic for a fixed spec (byte-equal traces across runs).
std::vector<MemAccess> generate(const TraceSpec& spec);

/// True if `pc` belongs to the generator pool that installs
/// eventually-written lines; ground truth for write prediction.
bool pc_is_writer(std::uint64_t pc);

/// Text format: one record per line, `<pc-hex> <lineaddr-hex> R|W`.
void write_trace(const std::vector<MemAccess>& trace, const std::string& path);
std::vector<MemAccess> read_trace(const std::string& path,
                                  std::uint64_t memory_lines = 1ull << 30);

TraceSpec parse_trace_spec_text(const std::string& text);
TraceSpec load_trace_spec_file(const std::string& path);

}  // namespace hmsim
