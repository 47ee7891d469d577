#include "hmsim/channel.hpp"

#include <algorithm>
#include <cmath>

namespace hmsim {

namespace {

// 64-entry LRU of open 256B rows per XPoint device.
class RowBuffer {
  public:
    RowBuffer(unsigned entries, unsigned lines_per_row)
        : entries_(entries), lines_per_row_(lines_per_row) {}

    bool access(std::uint64_t line) {
        std::uint64_t row = line / lines_per_row_;
        ++tick_;
        for (auto& e : rows_)
            if (e.row == row) {
                e.tick = tick_;
                return true;
            }
        if (rows_.size() < entries_) {
            rows_.push_back({row, tick_});
        } else {
            auto lru = std::min_element(rows_.begin(), rows_.end(),
                                        [](const Entry& a, const Entry& b) {
                                            return a.tick < b.tick;
                                        });
            *lru = {row, tick_};
        }
        return false;
    }

  private:
    struct Entry {
        std::uint64_t row;
        std::uint64_t tick;
    };
    unsigned entries_;
    unsigned lines_per_row_;
    std::uint64_t tick_ = 0;
    std::vector<Entry> rows_;
};

struct XpointDevice {
    RowBuffer rows;
    double read_free = 0.0;
    std::deque<double> write_completions;

    XpointDevice(const ChannelTimings& t)
        : rows(t.xpoint_row_buffers, t.xpoint_lines_per_row) {}
};

}  // namespace

ChannelStats simulate_channel(const std::vector<TransferRecord>& transfers,
                              ChannelMode mode, const ChannelTimings& t) {
    ChannelStats stats;
    stats.transfers = transfers.size();
    stats.bytes = transfers.size() * kLineBytes;
    if (transfers.empty()) return stats;

    std::array<double, 2> bus_free{0.0, 0.0};
    XpointDevice xp[2] = {XpointDevice(t), XpointDevice(t)};

    std::deque<double> inflight;  // completion times of issued requests
    std::vector<double> latencies;
    latencies.reserve(transfers.size());

    double issue_clock = 0.0;
    double makespan = 0.0;

    for (const TransferRecord& r : transfers) {
        unsigned parity = static_cast<unsigned>(r.row & 1);
        unsigned channel;
        if (mode == ChannelMode::Shared)
            channel = parity;
        else
            channel = r.device == Device::Dram ? 0 : 1;

        // Closed loop: at most inflight_limit requests outstanding.
        if (inflight.size() >= t.inflight_limit) {
            issue_clock = std::max(issue_clock, inflight.front());
            inflight.pop_front();
        }
        double arrival = issue_clock;

        double bus_start = std::max(arrival, bus_free[channel]);
        double bus_end = bus_start + t.bus_transfer_ns;
        bus_free[channel] = bus_end;
        stats.bus_busy_ns[channel] += t.bus_transfer_ns;

        double completion;
        if (r.device == Device::Dram) {
            completion = bus_end + t.dram_access_ns;
        } else {
            XpointDevice& dev = xp[parity];
            if (r.category == Category::XpointWrite) {
                while (!dev.write_completions.empty() &&
                       dev.write_completions.front() <= bus_end)
                    dev.write_completions.pop_front();
                double start = bus_end;
                if (dev.write_completions.size() >= t.write_queue_depth) {
                    start = std::max(start, dev.write_completions.front());
                    dev.write_completions.pop_front();
                }
                completion = start + t.xpoint_write_ns;
                dev.write_completions.push_back(completion);
            } else {
                bool row_hit = dev.rows.access(r.row);
                double service = row_hit ? t.xpoint_read_hit_ns : t.xpoint_read_miss_ns;
                double start = std::max(bus_end, dev.read_free);
                completion = start + service;
                dev.read_free = completion;
            }
        }

        inflight.push_back(completion);
        latencies.push_back(completion - arrival);
        makespan = std::max(makespan, completion);
    }

    stats.makespan_ns = makespan;
    double sum = 0.0;
    for (double l : latencies) sum += l;
    stats.mean_latency_ns = sum / static_cast<double>(latencies.size());
    std::sort(latencies.begin(), latencies.end());
    stats.p95_latency_ns = latencies[static_cast<std::size_t>(
        std::min<double>(latencies.size() - 1.0, 0.95 * latencies.size()))];
    return stats;
}

}  // namespace hmsim
