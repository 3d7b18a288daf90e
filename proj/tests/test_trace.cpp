#include <doctest.h>

#include <sstream>

#include "macsim/trace.hpp"
#include "test_helpers.hpp"

using namespace macsim;

TEST_CASE("trace line parsing") {
    auto p = parse_trace_line("R 0x1a40");
    CHECK(p.kind == ParsedLine::Kind::Record);
    CHECK(p.access == Access{AccessKind::Read, 0x1a40});

    p = parse_trace_line("W 4096");
    CHECK(p.access == Access{AccessKind::Write, 4096});

    CHECK(parse_trace_line("# header").kind == ParsedLine::Kind::Comment);
    CHECK(parse_trace_line("   ").kind == ParsedLine::Kind::Comment);

    CHECK_THROWS_AS(parse_trace_line("X 0x10", 3), TraceParseError);
    CHECK_THROWS_AS(parse_trace_line("R zzz", 4), TraceParseError);
    CHECK_THROWS_AS(parse_trace_line("R", 5), TraceParseError);
    try {
        parse_trace_line("X 0x10", 3);
    } catch (const TraceParseError& e) {
        CHECK(e.line_number == 3);
    }
}

TEST_CASE("format/parse round-trip") {
    Rng rng(17);
    for (int i = 0; i < 500; ++i) {
        Access a{rng.chance(0.5) ? AccessKind::Write : AccessKind::Read, rng.next_u64()};
        auto p = parse_trace_line(format_access(a));
        REQUIRE(p.kind == ParsedLine::Kind::Record);
        CHECK(p.access == a);
    }
}

TEST_CASE("trace file round-trip keeps all records") {
    Trace t = test::random_mixed_trace(3, 500);
    t.name = "roundtrip";
    std::stringstream buf;
    write_trace(buf, t);
    Trace back = read_trace(buf);
    CHECK(back.accesses == t.accesses);
}

TEST_CASE("scan generator") {
    Trace t = gen_scan(3, 64, AccessKind::Read);
    REQUIRE(t.accesses.size() == 3);
    CHECK(t.accesses[0] == Access{AccessKind::Read, 0x0});
    CHECK(t.accesses[1] == Access{AccessKind::Read, 0x40});
    CHECK(t.accesses[2] == Access{AccessKind::Read, 0x80});

    Trace w = gen_scan(1, 64, AccessKind::Write);
    REQUIRE(w.accesses.size() == 1);
    CHECK(w.accesses[0] == Access{AccessKind::Write, 0x0});

    CHECK(trace_stats(t).unique_lines == 3);
    CHECK_THROWS_AS(gen_scan(0, 64, AccessKind::Read), std::invalid_argument);
}

TEST_CASE("loop working-set generator") {
    SUBCASE("hot-only loop revisits in order") {
        Trace t = gen_loop_working_set(2, 0, 2, 0.0, 1);
        REQUIRE(t.accesses.size() == 4);
        CHECK(t.accesses[0] == Access{AccessKind::Read, 0x0});
        CHECK(t.accesses[1] == Access{AccessKind::Read, 0x40});
        CHECK(t.accesses[2] == Access{AccessKind::Read, 0x0});
        CHECK(t.accesses[3] == Access{AccessKind::Read, 0x40});
    }
    SUBCASE("no hot lines degenerates to a scan") {
        Trace t = gen_loop_working_set(0, 3, 1, 0.0, 1);
        REQUIRE(t.accesses.size() == 3);
        CHECK(trace_stats(t).unique_lines == 3);
        for (const auto& a : t.accesses) CHECK(a.kind == AccessKind::Read);
    }
    SUBCASE("write_fraction 1 forces writes on hot lines") {
        Trace t = gen_loop_working_set(4, 2, 3, 1.0, 9);
        for (size_t i = 0; i < t.accesses.size(); ++i) {
            const bool hot_slot = (i % 6) < 4;
            CHECK(t.accesses[i].kind == (hot_slot ? AccessKind::Write : AccessKind::Read));
        }
    }
}

TEST_CASE("zipf generator") {
    SUBCASE("single support point") {
        Trace t = gen_zipf_mixed(1, 5, 1.2, 0.0, 42);
        REQUIRE(t.accesses.size() == 5);
        for (const auto& a : t.accesses) CHECK(a == Access{AccessKind::Read, 0x0});
    }
    SUBCASE("uniform write fraction concentrates near the target") {
        Trace t = gen_zipf_mixed(10, 10000, 0.0, 0.5, 4);
        const double wf = trace_stats(t).write_fraction;
        CHECK(wf > 0.45);
        CHECK(wf < 0.55);
    }
    SUBCASE("same seed, same trace") {
        Trace a = gen_zipf_mixed(100, 2000, 0.9, 0.3, 77);
        Trace b = gen_zipf_mixed(100, 2000, 0.9, 0.3, 77);
        CHECK(a.accesses == b.accesses);
    }
    SUBCASE("skew favors the head of the popularity ranking") {
        Trace t = gen_zipf_mixed(100, 20000, 1.2, 0.0, 5);
        uint64_t head = 0;
        for (const auto& a : t.accesses)
            if (a.address / 64 < 10) ++head;
        CHECK(head > t.accesses.size() / 2);
    }
}

TEST_CASE("trace statistics") {
    SUBCASE("empty trace") {
        TraceStats s = trace_stats(Trace{});
        CHECK(s.total_accesses == 0);
        CHECK(s.unique_lines == 0);
        CHECK(s.write_fraction == 0.0);
        CHECK(s.cold_accesses == 0);
    }
    SUBCASE("scan has only cold accesses") {
        TraceStats s = trace_stats(gen_scan(5, 64, AccessKind::Read));
        CHECK(s.unique_lines == 5);
        CHECK(s.cold_accesses == 5);
        for (uint64_t count : s.reuse_distance_histogram) CHECK(count == 0);
    }
    SUBCASE("stack distance of a re-reference") {
        Trace t;
        t.accesses = {{AccessKind::Read, 0x0},
                      {AccessKind::Read, 0x40},
                      {AccessKind::Read, 0x0}};
        TraceStats s = trace_stats(t);
        CHECK(s.cold_accesses == 2);
        CHECK(s.reuse_distance_histogram[1] == 1);  // one line in between
    }
}

TEST_CASE("offset jitter stays inside the line") {
    Trace t = gen_zipf_mixed(8, 2000, 0.5, 0.5, 6, 64, 64);
    bool nonzero_offset = false;
    for (const auto& a : t.accesses)
        if (a.address % 64 != 0) nonzero_offset = true;
    CHECK(nonzero_offset);
}
