#include "mems/relational.hpp"
#include "correctness.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace mems;

namespace {

std::vector<uint32_t> all_tuples(uint32_t n) {
    std::vector<uint32_t> v;
    for (uint32_t i = 1; i <= n; ++i) v.push_back(i);
    return v;
}

}  // namespace

TEST_CASE("sequential layout mapping examples") {
    const DeviceParams p = cmu_defaults();
    const RelLayoutRSY rsy({16, 64, 2621440}, p);
    CHECK(rsy.m() == 400);
    CHECK(rsy.rows_used() == 6554);
    CHECK(rsy.map(1, 1) == RSAddr{1, 1});
    CHECK(rsy.map(401, 2) == RSAddr{2, 2});
    CHECK(rsy.map(400, 16) == RSAddr{6400, 1});
    CHECK(rsy.map_phys(1, 1) == PhysAddr{1, 1, 1, 1});
    CHECK(rsy.map_phys(401, 2) == rs_to_mems({2, 2}, p));
    CHECK_THROWS_AS(rsy.map(0, 1), std::out_of_range);
    CHECK_THROWS_AS(rsy.map(1, 17), std::out_of_range);
}

TEST_CASE("sequential layout composition identity") {
    const DeviceParams p = cmu_defaults();
    const RelLayoutRSY rsy({16, 64, 2621440}, p);
    std::mt19937_64 rng(29);
    for (int i = 0; i < 1000000; ++i) {
        const uint32_t v = 1 + rng() % 2621440, w = 1 + rng() % 16;
        if (!(mems_to_rs(rsy.map_phys(v, w), p) == rsy.map(v, w))) FAIL("composition mismatch");
    }
    const DeviceParams small = oracle::small_device(3, 3, 4, 3, 4);
    for (uint32_t k = 1; k <= 9; ++k) {
        const uint32_t m = 9 / k, n = m * 12;
        const RelLayoutRSY l({k, 64, n}, small);
        std::set<RSAddr> seen;
        for (uint32_t v = 1; v <= n; ++v)
            for (uint32_t w = 1; w <= k; ++w) {
                REQUIRE(rs_to_mems(l.map(v, w), small) == l.map_phys(v, w));
                seen.insert(l.map(v, w));
            }
        CHECK(seen.size() == size_t(n) * k);
    }
}

TEST_CASE("parallel layout mapping") {
    const DeviceParams p = cmu_defaults();
    const RelLayoutRP rp({16, 64, 12800}, p);
    CHECK(rp.band_rows() == 2);
    CHECK(rp.map(1, 1) == RSAddr{1, 1});
    CHECK(rp.map(6401, 1) == RSAddr{1, 2});
    CHECK(rp.map(1, 2) == RSAddr{1, 3});
    CHECK(rp.band_start(16) == 31);

    const DeviceParams small = oracle::small_device(3, 3, 4, 3, 4);
    const RelLayoutRP l({3, 64, 30}, small);  // h = 4, 3 bands fill 12 rows
    std::set<RSAddr> seen;
    for (uint32_t v = 1; v <= 30; ++v)
        for (uint32_t w = 1; w <= 3; ++w) seen.insert(l.map(v, w));
    CHECK(seen.size() == 90);
    CHECK_THROWS_AS(RelLayoutRP({3, 64, 37}, small), std::invalid_argument);
    CHECK_THROWS_AS(RelLayoutRSY({3, 64, 37}, small), std::invalid_argument);
    CHECK_THROWS_AS(RelLayoutRSY({10, 64, 1}, small), std::invalid_argument);
    CHECK_THROWS_AS(RelLayoutRP({3, 60, 1}, small), std::invalid_argument);
}

TEST_CASE("multi-sector values take consecutive rows") {
    const DeviceParams p = cmu_defaults();
    const RelLayoutRSY rsy({16, 128, 4000}, p);
    CHECK(rsy.map(401, 1) == RSAddr{1, 3});
    const RelLayoutRP rp({16, 128, 12800}, p);
    CHECK(rp.map(6401, 1) == RSAddr{1, 3});
    CHECK(rp.map(1, 2) == RSAddr{1, 5});
    CHECK(rsy.compile(make_range_query(1, 0.1)).scans.front().length == 20);
}

TEST_CASE("sequential plan scan counts") {
    const DeviceParams p = cmu_defaults();
    const RelLayoutRSY rsy({16, 64, 2621440}, p);
    CHECK(rsy.compile(make_range_query(8, 0.1)).scans.size() == 3);
    CHECK(rsy.compile(make_range_query(1, 0.1)).scans.size() == 1);
    CHECK(rsy.compile(make_range_query(16, 0.1)).scans.size() == 5);
    for (uint32_t np = 1; np <= 16; ++np) {
        const AccessPlan plan = rsy.compile(make_range_query(np, 0.5));
        REQUIRE(plan.scans.size() == (400 * np + 1279) / 1280);
        for (size_t i = 0; i < plan.scans.size(); ++i) {
            REQUIRE(plan.scans[i].tips.size() <= 1280);
            REQUIRE(plan.scans[i].reverse == (i % 2 == 1));
        }
    }
    const CostInput c8 = rsy.k_values(make_range_query(8, 0.1));
    CHECK(c8.k_parallel == 1280);
    CHECK(c8.k_random == 1);
    CHECK(rsy.k_values(make_range_query(1, 0.1)).k_parallel == 400);
}

TEST_CASE("parallel plan scan counts") {
    const DeviceParams p = cmu_defaults();
    const uint32_t n = 2621440;
    const RelLayoutRP rp({16, 64, n}, p);
    const auto q01 = gen_qualifying(n, 0.1, Qualifying::uniform, 5);
    const AccessPlan plan = rp.compile(make_range_query(8, 0.1), q01);
    CHECK(plan.scans.size() == 5 + 7);
    for (size_t i = 5; i < plan.scans.size(); ++i) CHECK(plan.scans[i].length == rp.band_rows());

    const AccessPlan full = rp.compile(make_range_query(4, 1.0), all_tuples(n));
    CHECK(full.scans.size() == 4 * 5);

    const AccessPlan none = rp.compile(make_range_query(1, 0.0), {});
    CHECK(none.scans.size() == 5);
    CHECK(rp.compile(make_range_query(6, 0.0), {}).scans.size() == 5);

    const CostInput c = rp.k_values(make_range_query(8, 0.1));
    CHECK(c.k_parallel == 1280);
    CHECK(c.k_random <= 8);

    // Clustered qualifying tuples fill whole rows; empty rows end a scan.
    const auto clustered = gen_qualifying(n, 0.1, Qualifying::clustered, 0);
    const AccessPlan cl = rp.compile(make_range_query(2, 0.1), clustered);
    CHECK(cl.scans.size() == 5 + 5);
    Emulator emu(p);
    const Timing t = emu.execute(cl);
    CHECK(t.sectors == uint64_t(n) + clustered.size());
}

TEST_CASE("plans return exactly the query answer") {
    const DeviceParams p = oracle::small_device(8, 8, 20, 5, 16);
    std::mt19937_64 rng(31);
    for (auto mode : {Qualifying::uniform, Qualifying::clustered}) {
        const Relation rel = gen_relation(1000, 4, 8, 77, 0.3, mode, p);
        const auto ids = check::index_relation(rel);
        const RelLayoutRSY rsy(rel.schema, p);
        const RelLayoutRP rp(rel.schema, p);
        MediaImage m_rsy(p), m_rp(p);
        rsy.store(m_rsy, [&](uint32_t v, uint32_t w) { return rel.bytes(v, w); });
        rp.store(m_rp, [&](uint32_t v, uint32_t w) { return rel.bytes(v, w); });
        for (uint32_t np = 1; np <= 4; ++np) {
            const RangeQuery q = make_range_query(np, 0.3, rel.bound);
            CHECK(check::relational_mismatches(rel, ids, m_rsy, q, rsy.compile(q)) == 0);
            CHECK(check::relational_mismatches(rel, ids, m_rp, q, rp.compile(q, rel.qualifying)) == 0);
        }
    }
    (void)rng;
}

TEST_CASE("query validation") {
    const DeviceParams p = cmu_defaults();
    const RelLayoutRSY rsy({16, 64, 1000}, p);
    RangeQuery q = make_range_query(3, 0.1);
    q.predicate_attr = 5;
    CHECK_THROWS_AS(rsy.compile(q), std::invalid_argument);
    q = make_range_query(3, 0.1);
    q.projected = {3, 1};
    CHECK_THROWS_AS(rsy.compile(q), std::invalid_argument);
    CHECK_THROWS_AS(make_range_query(0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_range_query(2, 1.5), std::invalid_argument);
    const RelLayoutRP rp({16, 64, 1000}, p);
    CHECK_THROWS_AS(rp.compile(make_range_query(2, 0.1), std::vector<uint32_t>{1001}),
                    std::out_of_range);
}
