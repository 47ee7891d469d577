#include <doctest.h>

#include <map>
#include <set>

#include "hmsim/addr.hpp"
#include "hmsim/config.hpp"
#include "hmsim/storage.hpp"

using namespace hmsim;

TEST_CASE("cache_index maps addresses direct-mapped") {
    CacheGeometry g;  // 2^26 sets
    CHECK(cache_index(0, g) == 0);
    CHECK(cache_index(1ull << 26, g) == 0);
    CHECK(cache_index((1ull << 26) + 5, g) == 5);

    // mask form agrees with the modular oracle on arbitrary addresses
    for (LineAddr a : {7ull, 12345678ull, (1ull << 30) - 1, 999999999ull})
        CHECK(cache_index(a, g) == a % g.cache_lines);
}

TEST_CASE("toc_line_of groups 64 adjacent sets per metadata line") {
    CHECK(toc_line_of(0).line == 0);
    CHECK(toc_line_of(0).slot == 0);
    CHECK(toc_line_of(63).line == 0);
    CHECK(toc_line_of(63).slot == 63);
    CHECK(toc_line_of(64).line == 1);
    CHECK(toc_line_of(64).slot == 0);

    // partition property: every metadata line covers exactly 64 sets
    std::map<std::uint64_t, int> per_line;
    for (std::uint64_t s = 0; s < 64 * 50; ++s) per_line[toc_line_of(s).line]++;
    for (auto& [line, n] : per_line) CHECK(n == 64);
}

TEST_CASE("cache_index is surjective onto the set space") {
    CacheGeometry g;
    g.cache_lines = 256;
    g.memory_lines = 1024;
    g.metadata_region_lines = 4;
    std::set<std::uint64_t> seen;
    for (LineAddr a = 0; a < g.memory_lines; ++a) {
        std::uint64_t idx = cache_index(a, g);
        CHECK(idx < g.cache_lines);
        seen.insert(idx);
    }
    CHECK(seen.size() == g.cache_lines);
}

TEST_CASE("geometry validation") {
    CacheGeometry g;
    CHECK(g.valid());
    g.cache_lines = 3 << 10;  // not a power of two
    CHECK(!g.valid());
    g = CacheGeometry{};
    g.metadata_region_lines = 1;  // cannot cover the cache
    CHECK(!g.valid());
}

TEST_CASE("storage budget matches the quoted figures") {
    PolicyConfig tictoc;
    tictoc.organization = Organization::TicToc;
    StorageBudget b = storage_budget(tictoc);
    CHECK(b.kb_total() == 34);  // 1KB predictor + 32KB metadata cache + 1KB SWP
    CHECK(b.l3_bits_per_line == 2);
    CHECK(b.hm_predictor_bytes == 1024);
    CHECK(b.metadata_cache_bytes == 512 * 64);
    CHECK(b.write_predictor_bytes == 512 * 12 / 8);

    PolicyConfig tic;
    tic.organization = Organization::Tic;
    StorageBudget bt = storage_budget(tic);
    CHECK(bt.kb_total() == 1);
    CHECK(bt.l3_bits_per_line == 1);

    PolicyConfig sram;
    sram.organization = Organization::IdealSram;
    CHECK(storage_budget(sram).sram_tag_bytes == (1ull << 26));  // 64 MB

    // itemized components sum to the total
    CHECK(b.byte_total() ==
          b.hm_predictor_bytes + b.metadata_cache_bytes + b.write_predictor_bytes);
}

TEST_CASE("config parsing round-trips the schema") {
    PolicyConfig c = parse_config_text(
        "organization = tictoc\n"
        "dcd = true\n"
        "pdm = 1\n"
        "bypass = preemptive_write_allocate\n"
        "metadata_cache_entries = 256\n"
        "channel_mode = dedicated\n"
        "rng_seed = 99\n"
        "# comment line\n"
        "cache_lines = 16384\n"
        "memory_lines = 524288\n"
        "metadata_region_lines = 256\n"
        "l3_lines = 4096\n"
        "l3_ways = 16\n");
    CHECK(c.organization == Organization::TicToc);
    CHECK(c.dcd_enabled);
    CHECK(c.pdm_enabled);
    CHECK(c.bypass == BypassMode::PreemptiveWriteAllocate);
    CHECK(c.metadata_cache_entries == 256);
    CHECK(c.channel_mode == ChannelMode::Dedicated);
    CHECK(c.rng_seed == 99);
    CHECK(c.geometry.cache_lines == 16384);
}

TEST_CASE("feature flags are rejected outside tictoc") {
    CHECK_THROWS_AS(parse_config_text("organization = tic\ndcd = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("organization = toc\npdm = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("organization = ideal_sram\nbypass = bypass90\n"),
                    ConfigError);
    // bypass90 is also legal for tic
    CHECK_NOTHROW(parse_config_text("organization = tic\nbypass = bypass90\n"));
    CHECK_THROWS_AS(parse_config_text("organization = tic\nbypass = write_allocate\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text("nonsense = 1\n"), ConfigError);
}
