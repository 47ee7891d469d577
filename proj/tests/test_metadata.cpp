#include <doctest.h>

#include "hmsim/metadata.hpp"

using namespace hmsim;

TEST_CASE("toc entry bit layout round-trips all byte values") {
    for (unsigned raw = 0; raw < 256; ++raw) {
        TocEntry e;
        e.raw = static_cast<std::uint8_t>(raw);
        TocEntry back = TocEntry::make(e.tag(), e.dirty(), e.valid());
        CHECK(back.raw == raw);
    }
    TocEntry e = TocEntry::make(0x2a, true, true);
    CHECK(e.tag() == 0x2a);
    CHECK(e.dirty());
    CHECK(e.valid());
    CHECK(e.raw == ((0x2a << 2) | 2 | 1));
}

TEST_CASE("toc store defaults to invalid entries") {
    TocStore t;
    CHECK(!t.get(12345).valid());
    t.put(12345, TocEntry::make(3, false, true));
    CHECK(t.get(12345).valid());
    CHECK(t.get(12345).tag() == 3);
    CHECK(!t.get(12344).valid());  // neighbors in the same line stay invalid
}

TEST_CASE("metadata cache: lookup after install hits") {
    MetadataCache mdc(512);
    CHECK(!mdc.lookup(7));  // cold
    mdc.install(7);
    CHECK(mdc.lookup(7));
    CHECK(mdc.lookups() == 2);
    CHECK(mdc.misses() == 1);
}

TEST_CASE("513 distinct lines round-robin defeat a 512-entry LRU") {
    MetadataCache mdc(512);
    for (int pass = 0; pass < 3; ++pass)
        for (std::uint64_t id = 0; id < 513; ++id) {
            bool hit = mdc.lookup(id);
            CHECK(!hit);
            if (!hit) mdc.install(id);
        }
    CHECK(mdc.misses() == mdc.lookups());
    CHECK(mdc.miss_ratio() == 1.0);
}

TEST_CASE("install respects capacity and reports the LRU victim") {
    MetadataCache mdc(2);
    CHECK(!mdc.install(1).valid);  // room left
    CHECK(!mdc.install(2).valid);

    SUBCASE("clean victim") {
        auto ev = mdc.install(3);
        REQUIRE(ev.valid);
        CHECK(ev.line_id == 1);
        CHECK(!ev.was_dirty);
    }
    SUBCASE("victim that was updated while resident") {
        mdc.mark_dirty(1, TocDirtier::DirtyBitUpdate);
        mdc.lookup(2);  // make 1 the LRU
        auto ev = mdc.install(3);
        REQUIRE(ev.valid);
        CHECK(ev.line_id == 1);
        CHECK(ev.was_dirty);
        CHECK(ev.dirtier == TocDirtier::DirtyBitUpdate);
    }
}

TEST_CASE("duplicate install is rejected") {
    MetadataCache mdc(4);
    mdc.install(9);
    CHECK_THROWS(mdc.install(9));
}

TEST_CASE("mark_dirty keeps the first dirtying purpose") {
    MetadataCache mdc(4);
    mdc.install(1);
    mdc.mark_dirty(1, TocDirtier::TagUpdate);
    mdc.mark_dirty(1, TocDirtier::DirtyBitUpdate);  // ignored, already dirty
    auto drained = mdc.drain();
    REQUIRE(drained.size() == 1);
    CHECK(drained[0].dirtier == TocDirtier::TagUpdate);
}

TEST_CASE("miss ratio recomputes from hit/miss history") {
    MetadataCache mdc(4);
    std::uint64_t misses = 0, lookups = 0;
    auto touch = [&](std::uint64_t id) {
        ++lookups;
        if (!mdc.lookup(id)) {
            ++misses;
            mdc.install(id);
        }
    };
    for (std::uint64_t id : {1, 2, 3, 1, 2, 5, 6, 7, 1, 1, 2})
        touch(id);
    CHECK(mdc.lookups() == lookups);
    CHECK(mdc.misses() == misses);
    CHECK(mdc.miss_ratio() ==
          doctest::Approx(double(misses) / double(lookups)));
}

TEST_CASE("drain reports dirty lines sorted and empties the cache") {
    MetadataCache mdc(8);
    for (std::uint64_t id : {5, 3, 9, 1}) mdc.install(id);
    mdc.mark_dirty(9, TocDirtier::TagUpdate);
    mdc.mark_dirty(3, TocDirtier::DirtyBitUpdate);
    auto drained = mdc.drain();
    REQUIRE(drained.size() == 2);
    CHECK(drained[0].line_id == 3);
    CHECK(drained[1].line_id == 9);
    CHECK(mdc.size() == 0);
}
