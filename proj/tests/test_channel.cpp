#include <doctest.h>

#include "hmsim/channel.hpp"

using namespace hmsim;

namespace {

TransferRecord dram_read(std::uint64_t row) {
    return {Category::CacheHitRead, Device::Dram, row};
}
TransferRecord xp_read(std::uint64_t row) {
    return {Category::XpointRead, Device::Xpoint, row};
}
TransferRecord xp_write(std::uint64_t row) {
    return {Category::XpointWrite, Device::Xpoint, row};
}

}  // namespace

TEST_CASE("empty stream has zero busy time in both modes") {
    for (auto mode : {ChannelMode::Shared, ChannelMode::Dedicated}) {
        ChannelStats s = simulate_channel({}, mode);
        CHECK(s.makespan_ns == 0.0);
        CHECK(s.bus_busy_ns[0] == 0.0);
        CHECK(s.bus_busy_ns[1] == 0.0);
    }
}

TEST_CASE("a 64B transfer occupies the bus for 4 ns") {
    ChannelStats s = simulate_channel({dram_read(0)}, ChannelMode::Shared);
    CHECK(s.bus_busy_ns[0] == doctest::Approx(4.0));
    CHECK(s.makespan_ns == doctest::Approx(4.0 + 13.0));  // bus + access
}

TEST_CASE("xpoint row buffer: cold read 80ns, rehit 4ns") {
    // same 256B row (lines 0..3), same device (parity 0): lines 0 and 2
    ChannelStats cold = simulate_channel({xp_read(0)}, ChannelMode::Shared);
    CHECK(cold.makespan_ns == doctest::Approx(4.0 + 80.0));

    ChannelStats pair = simulate_channel({xp_read(0), xp_read(2)}, ChannelMode::Shared);
    // second read: bus 4..8, row hit 4ns on a free device
    CHECK(pair.makespan_ns == doctest::Approx(4.0 + 80.0 + 4.0));

    ChannelStats far = simulate_channel({xp_read(0), xp_read(64)}, ChannelMode::Shared);
    CHECK(far.makespan_ns > pair.makespan_ns);  // different row misses again
}

TEST_CASE("xpoint writes overlap through the write queue") {
    std::vector<TransferRecord> writes;
    for (int i = 0; i < 64; ++i) writes.push_back(xp_write(2 * i));  // one device
    ChannelStats s = simulate_channel(writes, ChannelMode::Dedicated);
    // 64 writes fit the queue: makespan ~ last bus slot + tWR, far below 64x320
    CHECK(s.makespan_ns < 64 * 320.0);
    CHECK(s.makespan_ns >= 320.0);
}

TEST_CASE("bytes charged equal 64 per transfer in both modes") {
    std::vector<TransferRecord> stream;
    for (int i = 0; i < 1000; ++i)
        stream.push_back(i % 3 ? dram_read(i) : xp_read(i));
    for (auto mode : {ChannelMode::Shared, ChannelMode::Dedicated}) {
        ChannelStats s = simulate_channel(stream, mode);
        CHECK(s.transfers == 1000);
        CHECK(s.bytes == 64000);
        CHECK(s.bus_busy_ns[0] + s.bus_busy_ns[1] == doctest::Approx(4000.0));
        CHECK(s.bus_busy_ns[0] <= s.makespan_ns);
        CHECK(s.bus_busy_ns[1] <= s.makespan_ns);
    }
}

TEST_CASE("all-hit stream: shared mode halves the makespan") {
    std::vector<TransferRecord> hits;
    for (int i = 0; i < 20000; ++i) hits.push_back(dram_read(i));
    ChannelStats shared = simulate_channel(hits, ChannelMode::Shared);
    ChannelStats dedicated = simulate_channel(hits, ChannelMode::Dedicated);
    // both channels usable vs one DRAM channel
    CHECK(shared.makespan_ns < 0.55 * dedicated.makespan_ns);
    CHECK(shared.bus_busy_ns[0] == doctest::Approx(0.5 * dedicated.bus_busy_ns[0]));
}

TEST_CASE("memory-only stream: shared and dedicated are symmetric") {
    std::vector<TransferRecord> reads;
    for (int i = 0; i < 20000; ++i) reads.push_back(xp_read(i * 7));
    ChannelStats shared = simulate_channel(reads, ChannelMode::Shared);
    ChannelStats dedicated = simulate_channel(reads, ChannelMode::Dedicated);
    double ratio = shared.makespan_ns / dedicated.makespan_ns;
    CHECK(ratio > 0.9);
    CHECK(ratio < 1.1);
}

TEST_CASE("latency stats are populated and ordered") {
    std::vector<TransferRecord> stream;
    for (int i = 0; i < 500; ++i) stream.push_back(xp_read(i * 5));
    ChannelStats s = simulate_channel(stream, ChannelMode::Shared);
    CHECK(s.mean_latency_ns > 0.0);
    CHECK(s.p95_latency_ns >= s.mean_latency_ns * 0.5);
    CHECK(s.makespan_ns >= s.p95_latency_ns);
}
