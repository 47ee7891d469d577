#include <doctest.h>

#include <cstdio>
#include <map>
#include <string>

#include "hmsim/trace.hpp"

using namespace hmsim;

namespace {

std::string temp_path(const char* name) {
    return std::string("/tmp/hmsim_test_") + name;
}

}  // namespace

TEST_CASE("degenerate stream: sequential reads") {
    TraceSpec spec;
    spec.pattern = TracePattern::Stream;
    spec.footprint_lines = 1000;
    spec.access_count = 1000;
    spec.write_fraction = 0.0;
    spec.seed = 3;
    auto trace = generate(spec);
    REQUIRE(trace.size() == 1000);
    for (std::uint64_t i = 0; i < 1000; ++i) {
        CHECK(trace[i].addr == i);
        CHECK(!trace[i].is_write());
    }
}

TEST_CASE("write_once writes each written line exactly once") {
    TraceSpec spec;
    spec.pattern = TracePattern::WriteOnce;
    spec.footprint_lines = 64;
    spec.access_count = 64;
    spec.write_fraction = 1.0;
    spec.locality_span = 1;
    spec.seed = 11;
    auto trace = generate(spec);
    REQUIRE(trace.size() == 64);
    std::map<LineAddr, int> writes;
    for (const auto& a : trace) {
        CHECK(a.is_write());
        writes[a.addr]++;
    }
    CHECK(writes.size() == 64);  // 64 distinct lines, none repeated
    for (auto& [addr, n] : writes) CHECK(n == 1);
}

TEST_CASE("write_once per-line write count is at most 1 for any spec") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 17ull}) {
        TraceSpec spec;
        spec.pattern = TracePattern::WriteOnce;
        spec.footprint_lines = 4096;
        spec.access_count = 3000;
        spec.write_fraction = 0.5;
        spec.locality_span = 8;
        spec.seed = seed;
        std::map<LineAddr, int> writes;
        for (const auto& a : generate(spec))
            if (a.is_write()) writes[a.addr]++;
        for (auto& [addr, n] : writes) CHECK(n <= 1);
    }
}

TEST_CASE("generators are deterministic in the spec") {
    TraceSpec spec;
    spec.pattern = TracePattern::Mix;
    spec.footprint_lines = 10000;
    spec.access_count = 20000;
    spec.write_fraction = 0.3;
    spec.locality_span = 32;
    spec.seed = 1234;
    CHECK(generate(spec) == generate(spec));

    spec.seed = 1235;
    CHECK(generate(spec) != generate(TraceSpec{}));
}

TEST_CASE("page_local bursts are line-consecutive") {
    TraceSpec spec;
    spec.pattern = TracePattern::PageLocal;
    spec.footprint_lines = 1 << 16;
    spec.access_count = 50000;
    spec.write_fraction = 0.2;
    spec.locality_span = 64;
    spec.seed = 5;
    auto trace = generate(spec);
    std::uint64_t adjacent = 0;
    for (std::size_t i = 1; i < trace.size(); ++i)
        if (trace[i].addr == trace[i - 1].addr + 1) ++adjacent;
    // >= 90% of consecutive pairs advance by exactly one line
    CHECK(adjacent >= (trace.size() - 1) * 9 / 10);
}

TEST_CASE("per-PC write behavior is deterministic ground truth") {
    TraceSpec spec;
    spec.pattern = TracePattern::Mix;
    spec.footprint_lines = 8192;
    spec.access_count = 30000;
    spec.write_fraction = 0.4;
    spec.locality_span = 64;
    spec.seed = 21;
    std::map<std::uint64_t, std::pair<bool, bool>> pc_kinds;  // pc -> (reads, writes)
    for (const auto& a : generate(spec)) {
        auto& k = pc_kinds[a.pc];
        (a.is_write() ? k.second : k.first) = true;
    }
    CHECK(pc_kinds.size() <= 64);
    for (auto& [pc, k] : pc_kinds) {
        CHECK((k.first ^ k.second));  // a PC reads or writes, never both
        CHECK(pc_is_writer(pc) == k.second);
    }
}

TEST_CASE("trace file round-trip") {
    TraceSpec spec;
    spec.pattern = TracePattern::PointerChase;
    spec.footprint_lines = 100000;
    spec.access_count = 100000;
    spec.write_fraction = 0.5;
    spec.locality_span = 4;
    spec.seed = 77;
    auto trace = generate(spec);
    std::string path = temp_path("roundtrip.trace");
    write_trace(trace, path);
    CHECK(read_trace(path) == trace);
    std::remove(path.c_str());
}

TEST_CASE("empty and short trace files") {
    std::string path = temp_path("tiny.trace");
    write_trace({}, path);
    CHECK(read_trace(path).empty());

    std::vector<MemAccess> three = {{0x10, 1, AccessKind::Read},
                                    {0x20, 2, AccessKind::Write},
                                    {0x30, 3, AccessKind::Read}};
    write_trace(three, path);
    auto back = read_trace(path);
    REQUIRE(back.size() == 3);
    CHECK(back == three);
    std::remove(path.c_str());
}

TEST_CASE("malformed trace records report the record number") {
    std::string path = temp_path("bad.trace");
    {
        std::FILE* f = std::fopen(path.c_str(), "w");
        std::fprintf(f, "10 20 R\nbogus\n30 40 W\n");
        std::fclose(f);
    }
    try {
        read_trace(path);
        FAIL("expected TraceError");
    } catch (const TraceError& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
    {
        std::FILE* f = std::fopen(path.c_str(), "w");
        std::fprintf(f, "10 20 R\n10 20 X\n");
        std::fclose(f);
    }
    CHECK_THROWS_AS(read_trace(path), TraceError);
    {
        std::FILE* f = std::fopen(path.c_str(), "w");
        std::fprintf(f, "10 ffffffffff R\n");  // beyond default memory range
        std::fclose(f);
    }
    CHECK_THROWS_AS(read_trace(path), TraceError);
    std::remove(path.c_str());
}

TEST_CASE("invalid spec combinations are rejected") {
    TraceSpec spec;
    spec.write_fraction = 1.5;
    CHECK_THROWS_AS(spec.validate(), TraceError);

    spec = TraceSpec{};
    spec.locality_span = 100;
    spec.footprint_lines = 50;
    CHECK_THROWS_AS(spec.validate(), TraceError);

    spec = TraceSpec{};
    spec.pattern = TracePattern::WriteOnce;
    spec.footprint_lines = 10;
    spec.access_count = 20;
    spec.locality_span = 1;
    CHECK_THROWS_AS(spec.validate(), TraceError);
}

TEST_CASE("trace spec file parsing") {
    TraceSpec s = parse_trace_spec_text(
        "pattern = write_repeat\nfootprint_lines = 4096\naccess_count = 1000\n"
        "write_fraction = 0.25\nlocality_span = 16\nseed = 9\n");
    CHECK(s.pattern == TracePattern::WriteRepeat);
    CHECK(s.locality_span == 16);
    CHECK_THROWS_AS(parse_trace_spec_text("pattern = nope\n"), TraceError);
    CHECK_THROWS_AS(parse_trace_spec_text("slope = 3\n"), TraceError);
}
