#include <doctest.h>

#include <sstream>

#include "macsim/report.hpp"
#include "test_helpers.hpp"

using namespace macsim;

namespace {

ExperimentSpec small_spec(PolicyId policy = PolicyId::LRU) {
    ExperimentSpec spec;
    spec.config = test::small_config(policy, 16, 4);
    spec.seed = 1;
    return spec;
}

// Skewed reuse for hits plus a write-heavy over-capacity loop for dirty
// evictions, so every LRU baseline divisor is nonzero.
Trace reuse_and_writeback_trace(uint64_t seed) {
    Trace t = gen_zipf_mixed(200, 3000, 1.0, 0.5, seed);
    Trace loop = gen_loop_working_set(96, 8, 60, 0.8, seed + 1);
    t.accesses.insert(t.accesses.end(), loop.accesses.begin(), loop.accesses.end());
    t.name = "reuse_and_writeback";
    return t;
}

}  // namespace

TEST_CASE("run_experiment") {
    SUBCASE("empty trace yields all-zero metrics") {
        CHECK(run_experiment(small_spec(), Trace{}).metrics == Metrics{});
    }
    SUBCASE("read-only scan past capacity never hits under LRU") {
        // single-use lines by construction, so nothing can re-hit
        auto spec = small_spec(PolicyId::LRU);
        const uint64_t capacity = spec.config.num_sets * spec.config.num_ways;
        Trace t = gen_scan(2 * capacity, 64, AccessKind::Read);
        Metrics m = run_experiment(spec, t).metrics;
        CHECK(m.hits == 0);
        CHECK(m.misses == 2 * capacity);
    }
    SUBCASE("same spec twice is identical") {
        auto spec = small_spec(PolicyId::BRRIP);
        Trace t = test::random_mixed_trace(8, 2000);
        CHECK(run_experiment(spec, t).metrics == run_experiment(spec, t).metrics);
    }
    SUBCASE("flush_at_end reports drained dirty lines separately") {
        auto spec = small_spec(PolicyId::LRU);
        spec.config.flush_at_end = true;
        Trace t = gen_scan(4, 64, AccessKind::Write);
        RunResult r = run_experiment(spec, t);
        CHECK(r.metrics.flush_writes == 4);
        CHECK(r.metrics.pcm_writes == 0);
        CHECK(r.flush_events.size() == 4);

        spec.include_flush_in_writes = true;
        CHECK(run_experiment(spec, t).metrics.pcm_writes == 4);
    }
}

TEST_CASE("compare") {
    SUBCASE("LRU alone gives a single row of ones") {
        Trace t = reuse_and_writeback_trace(2);
        ComparisonReport r = compare({PolicyId::LRU}, t, small_spec());
        REQUIRE(r.rows.size() == 1);
        CHECK(r.rows[0].normalized.writes == doctest::Approx(1.0));
        CHECK(r.rows[0].normalized.hit_ratio == doctest::Approx(1.0));
        CHECK(r.rows[0].normalized.stall_cycles == doctest::Approx(1.0));
    }
    SUBCASE("MAC cuts writes on a write-heavy loop with pollution") {
        // hot set larger than capacity keeps evictions flowing
        Trace t = reuse_and_writeback_trace(5);
        ComparisonReport r = compare({PolicyId::LRU, PolicyId::MAC}, t, small_spec());
        REQUIRE(r.rows.size() == 2);
        double mac_norm = -1.0;
        for (const auto& row : r.rows)
            if (row.policy == PolicyId::MAC) mac_norm = row.normalized.writes;
        CHECK(mac_norm > 0.0);
        CHECK(mac_norm < 1.0);
    }
    SUBCASE("LRU is added implicitly as the baseline") {
        Trace t = reuse_and_writeback_trace(3);
        ComparisonReport r = compare({PolicyId::MAC}, t, small_spec());
        CHECK(r.rows.size() == 2);
    }
    SUBCASE("duplicate policies give identical rows") {
        Trace t = reuse_and_writeback_trace(6);
        ComparisonReport r = compare({PolicyId::LRU, PolicyId::MAC, PolicyId::MAC}, t,
                                     small_spec());
        REQUIRE(r.rows.size() == 3);
        std::vector<const PolicyRow*> mac_rows;
        for (const auto& row : r.rows)
            if (row.policy == PolicyId::MAC) mac_rows.push_back(&row);
        REQUIRE(mac_rows.size() == 2);
        CHECK(mac_rows[0]->metrics == mac_rows[1]->metrics);
    }
    SUBCASE("rows are sorted by normalized writes") {
        Trace t = reuse_and_writeback_trace(5);
        ComparisonReport r = compare({PolicyId::LRU, PolicyId::MAC, PolicyId::RWA}, t,
                                     small_spec());
        for (size_t i = 1; i < r.rows.size(); ++i)
            CHECK(r.rows[i - 1].normalized.writes <= r.rows[i].normalized.writes);
    }
}

TEST_CASE("report emission") {
    Trace t = reuse_and_writeback_trace(4);
    ComparisonReport r = compare({PolicyId::LRU, PolicyId::MAC}, t, small_spec());

    SUBCASE("CSV has a header plus one row per policy") {
        std::istringstream in(emit_csv(r));
        std::string line;
        REQUIRE(std::getline(in, line));
        CHECK(line == "policy,hits,misses,pcm_reads,pcm_writes,flush_writes,hit_ratio,"
                      "stall_cycles,norm_writes,norm_hit_ratio,norm_cycles");
        int rows = 0;
        while (std::getline(in, line))
            if (!line.empty()) ++rows;
        CHECK(rows == 2);
    }
    SUBCASE("LRU row normalizes to exactly 1.0") {
        std::istringstream in(emit_csv(r));
        std::string line;
        std::getline(in, line);
        bool found = false;
        while (std::getline(in, line)) {
            if (line.rfind("LRU,", 0) == 0) {
                found = true;
                CHECK(line.find(",1.000000,1.000000,1.000000") != std::string::npos);
            }
        }
        CHECK(found);
    }
    SUBCASE("JSON and CSV agree on the numbers") {
        auto j = nlohmann::json::parse(emit_json(r));
        REQUIRE(j["policies"].size() == r.rows.size());
        for (size_t i = 0; i < r.rows.size(); ++i) {
            CHECK(j["policies"][i]["policy"] == to_string(r.rows[i].policy));
            CHECK(j["policies"][i]["pcm_writes"] == r.rows[i].metrics.pcm_writes);
            CHECK(j["policies"][i]["stall_cycles"] == r.rows[i].stall);
        }
    }
}

TEST_CASE("compare is deterministic and schedule-independent") {
    Trace t = reuse_and_writeback_trace(12);
    const std::vector<PolicyId> all = {PolicyId::LRU,  PolicyId::SRRIP, PolicyId::BRRIP,
                                       PolicyId::DRRIPW, PolicyId::LDF, PolicyId::RWA,
                                       PolicyId::MAC};
    const std::string serial = emit_csv(compare(all, t, small_spec(), false));
    const std::string serial2 = emit_csv(compare(all, t, small_spec(), false));
    const std::string parallel = emit_csv(compare(all, t, small_spec(), true));
    CHECK(serial == serial2);
    CHECK(serial == parallel);
}

TEST_CASE("normalization failure names the policy") {
    // empty trace: baseline counters are zero
    CHECK_THROWS_AS(compare({PolicyId::MAC}, Trace{}, small_spec()), std::domain_error);
}
