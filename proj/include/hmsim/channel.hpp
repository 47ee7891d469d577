#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <vector>

#include "hmsim/config.hpp"
#include "hmsim/policy.hpp"

namespace hmsim {

/// Device timing constants in ns. Bus moves 64B in 4ns (16 GB/s). DRAM is
/// latency-only (row-hit approximation, ample bank parallelism). XPoint reads
/// serialize on the device and depend on a 64-entry 256B row buffer; XPoint
/// writes overlap through a depth-64 write queue.
struct ChannelTimings {
    double bus_transfer_ns = 4.0;
    double dram_access_ns = 13.0;
    double xpoint_read_hit_ns = 4.0;    // tCAS
    double xpoint_read_miss_ns = 80.0;  // tRCD
    double xpoint_write_ns = 320.0;     // tWR
    unsigned xpoint_row_buffers = 64;
    unsigned xpoint_lines_per_row = 4;  // 256B rows
    unsigned write_queue_depth = 64;
    unsigned inflight_limit = 64;
};

struct ChannelStats {
    double makespan_ns = 0.0;
    std::array<double, 2> bus_busy_ns{0.0, 0.0};
    double mean_latency_ns = 0.0;
    double p95_latency_ns = 0.0;
    std::uint64_t transfers = 0;
    std::uint64_t bytes = 0;
};

/// Replays a transfer stream against two 16 GB/s channels.
///   Shared:    both channels carry a DRAM device and an XPoint device;
///              traffic interleaves across channels by line/row parity.
///   Dedicated: channel 0 owns both DRAM devices, channel 1 both XPoint
///              devices (same total device count, split buses).
ChannelStats simulate_channel(const std::vector<TransferRecord>& transfers,
                              ChannelMode mode,
                              const ChannelTimings& timings = ChannelTimings{});

}  // namespace hmsim
