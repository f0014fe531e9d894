#include "mems/spatial.hpp"
#include "correctness.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace mems;

TEST_CASE("curves") {
    // 2 x 2 Hilbert visit order.
    const auto o2 = curve_order(Curve::hilbert, 2, 2);
    CHECK(o2 == std::vector<std::pair<uint32_t, uint32_t>>{{1, 1}, {1, 2}, {2, 2}, {2, 1}});
    for (uint32_t n : {1u, 2u, 4u, 8u, 64u, 128u}) {
        for (uint64_t d = 0; d < uint64_t(n) * n; ++d) {
            auto [x, y] = hilbert_d2xy(n, d);
            REQUIRE(hilbert_xy2d(n, x, y) == d);
            if (d > 0) {
                auto [px, py] = hilbert_d2xy(n, d - 1);
                const uint32_t dist = (x > px ? x - px : px - x) + (y > py ? y - py : py - y);
                REQUIRE(dist == 1);  // edge-adjacent
            }
        }
    }
    for (uint64_t d = 0; d < 4096; ++d) {
        auto [x, y] = zorder_d2xy(d);
        REQUIRE(zorder_xy2d(x, y) == d);
    }
    // Rectangular grids: every cell exactly once.
    for (auto c : {Curve::hilbert, Curve::zorder}) {
        const auto o = curve_order(c, 10, 5);
        CHECK(std::set<std::pair<uint32_t, uint32_t>>(o.begin(), o.end()).size() == 50);
    }
    CHECK_THROWS_AS(hilbert_d2xy(6, 0), std::invalid_argument);
    CHECK(parse_curve("zorder") == Curve::zorder);
    CHECK_THROWS_AS(parse_curve("peano"), std::invalid_argument);
}

TEST_CASE("sequential spatial mapping") {
    const DeviceParams p = cmu_defaults();
    const SpatialLayoutSSY ssy({6400, 6400, 64}, p);
    CHECK(ssy.map(1, 1) == RSAddr{1, 1});
    CHECK(ssy.map(100, 200) == RSAddr{100, 200});
    CHECK(ssy.map_phys(100, 200) == PhysAddr{20, 2, 8, 17});
    CHECK(rs_to_mems(ssy.map(100, 200), p) == PhysAddr{20, 2, 8, 17});
    std::mt19937_64 rng(37);
    for (int i = 0; i < 1000000; ++i) {
        const uint32_t x = 1 + rng() % 6400, y = 1 + rng() % 6400;
        if (!(mems_to_rs(ssy.map_phys(x, y), p) == ssy.map(x, y))) FAIL("composition mismatch");
    }
    const DeviceParams small = oracle::small_device(3, 3, 4, 3, 4);
    const SpatialLayoutSSY s2({9, 12, 64}, small);
    for (uint32_t x = 1; x <= 9; ++x)
        for (uint32_t y = 1; y <= 12; ++y) REQUIRE(mems_to_rs(s2.map_phys(x, y), small) == s2.map(x, y));

    // Wider than N_PT: strips stacked along s.
    const SpatialLayoutSSY wide({20, 4, 64}, small);
    CHECK(wide.map(10, 1) == RSAddr{1, 5});
    CHECK(wide.map(19, 4) == RSAddr{1, 12});
    CHECK_THROWS_AS(SpatialLayoutSSY({20, 5, 64}, small), std::invalid_argument);
}

TEST_CASE("block grid choice") {
    const DeviceParams p = cmu_defaults();
    const SpatialSpace s{6400, 6400, 64};
    const BlockGrid g1 = build_block_grid(s, 1.0, p);
    CHECK(g1.bx == 80);
    CHECK(g1.by == 80);
    CHECK(g1.gx == 80);
    CHECK(g1.gy == 80);
    const BlockGrid g4 = build_block_grid(s, 0.25, p);
    CHECK(g4.bx == 40);
    CHECK(g4.by == 160);
    CHECK(build_block_grid(s, 16.0, p).bx == 320);
    // 2 sits halfway (in log scale) between 1 and 4: the wider shape wins.
    CHECK(build_block_grid(s, 2.0, p).bx == 160);
    CHECK(build_block_grid(s, 0.5, p).bx == 80);

    const auto shapes = block_shapes(6400);
    for (auto [bx, by] : shapes) {
        CHECK(bx * by == 6400);
        const uint32_t r = bx > by ? bx / by : by / bx;
        CHECK((r & (r - 1)) == 0);
    }
    CHECK(shapes.size() == 9);

    const DeviceParams four = oracle::small_device(2, 2, 4, 3, 4);
    const BlockGrid g = build_block_grid({4, 4, 64}, 1.0, four);
    CHECK(g.bx == 2);
    CHECK(g.by == 2);
    CHECK(g.order == std::vector<std::pair<uint32_t, uint32_t>>{{1, 1}, {1, 2}, {2, 2}, {2, 1}});

    WorkloadProfile prof;
    prof.entries = {{1, 100, 400}, {3, 100, 400}};
    CHECK(prof.weighted_aspect() == doctest::Approx(0.25));
    CHECK(build_block_grid(s, prof, p).bx == 40);
    CHECK(parse_profile("# f qx qy\n2 640 640\n1 2560 160\n").entries.size() == 2);
    CHECK_THROWS_AS(parse_profile(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_profile("0 1 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(WorkloadProfile{}.weighted_aspect(), std::invalid_argument);
}

TEST_CASE("parallel spatial mapping") {
    const DeviceParams p = cmu_defaults();
    const SpatialSpace s{6400, 6400, 64};
    const SpatialLayoutSP sp(s, build_block_grid(s, 1.0, p), p);
    CHECK(sp.map(1, 1) == RSAddr{1, 1});
    CHECK(sp.map(1, 2).r == 81);
    CHECK(sp.map(5, 5).s == sp.map(70, 3).s);
    CHECK(sp.map(5, 5).r != sp.map(70, 3).r);

    const DeviceParams small = oracle::small_device(3, 3, 4, 3, 4);
    // 9 tips: only the 3 x 3 shape qualifies.
    const SpatialSpace ss{7, 8, 64};
    const SpatialLayoutSP l(ss, build_block_grid(ss, 1.0, small), small);
    std::set<RSAddr> seen;
    for (uint32_t x = 1; x <= 7; ++x)
        for (uint32_t y = 1; y <= 8; ++y) seen.insert(l.map(x, y));
    CHECK(seen.size() == 56);
}

TEST_CASE("sequential spatial plans") {
    const DeviceParams p = cmu_defaults();
    const SpatialLayoutSSY ssy({6400, 6400, 64}, p);
    const AccessPlan a = ssy.compile({100, 100, 640, 640});
    REQUIRE(a.scans.size() == 1);
    CHECK(a.scans[0].length == 640);
    CHECK(ssy.compile({1, 1, 1810, 226}).scans.size() == 2);
    CHECK(ssy.compile({1, 1, 1280, 320}).scans.size() == 1);
    CHECK(ssy.k_values({1, 1, 160, 2560}).k_parallel == 160);
    CHECK(ssy.k_values({1, 1, 2560, 160}).k_parallel == 1280);
    CHECK(ssy.k_values({1, 1, 2560, 160}).k_random == 1);
    CHECK(ssy.compile({6401, 1, 5, 5}).scans.empty());
    // Clipped at the space border.
    CHECK(ssy.compile({6300, 6300, 640, 640}).scans[0].length == 101);
}

TEST_CASE("parallel spatial plans") {
    const DeviceParams p = cmu_defaults();
    const SpatialSpace s{6400, 6400, 64};
    const SpatialLayoutSP sp(s, build_block_grid(s, 1.0, p), p);

    // Exactly one block: one row read in five passes after a single seek.
    const AccessPlan one = sp.compile({81, 161, 80, 80});
    CHECK(one.scans.size() == 5);
    Emulator e1(p);
    const Timing t1 = e1.execute(one);
    CHECK(t1.n_repositions == 1);
    CHECK(t1.n_row_steps == 5);
    CHECK(t1.sectors == 6400);

    // Whole space: every block, all positions contiguous.
    const AccessPlan all = sp.compile({1, 1, 6400, 6400});
    Emulator e2(p);
    const Timing t2 = e2.execute(all);
    CHECK(t2.n_repositions == 1);
    CHECK(t2.sectors == 6400ull * 6400);

    // 64 x 64 across a block corner.
    CHECK(sp.query_blocks({50, 50, 64, 64}).size() == 4);
    CHECK(sp.query_blocks({1, 1, 64, 64}).size() == 1);

    const CostInput c = sp.k_values({50, 50, 640, 640});
    CHECK(c.k_random <= sp.query_blocks({50, 50, 640, 640}).size());
    for (double aspect : {16.0, 4.0, 1.0, 0.25, 0.0625}) {
        const QueryRegion shape = query_shape(s, 0.01, aspect);
        const SpatialLayoutSP tuned(s, build_block_grid(s, aspect, p), p);
        const double kp = tuned.k_values({77, 91, shape.qx, shape.qy}).k_parallel;
        CHECK(kp >= 640);
        CHECK(kp <= 1280);
    }

    const SpatialLayoutSP whole(s, build_block_grid(s, 1.0, p), p, true);
    Emulator e3(p);
    CHECK(e3.execute(whole.compile({50, 50, 10, 10})).sectors == 6400);
}

TEST_CASE("spatial plans return exactly the query region") {
    const DeviceParams p = oracle::small_device(8, 8, 20, 5, 16);
    const SpatialData data{{80, 40, 64}, 99};
    const auto ids = check::index_space(data);
    const auto obj = [&](uint32_t x, uint32_t y) { return data.object(x, y); };
    const SpatialLayoutSSY ssy(data.space, p);
    MediaImage m_ssy(p);
    ssy.store(m_ssy, obj);
    std::mt19937_64 rng(41);
    for (auto curve : {Curve::hilbert, Curve::zorder})
        for (double ratio : {0.25, 1.0, 4.0})
            for (bool whole : {false, true}) {
                const SpatialLayoutSP sp(data.space, build_block_grid(data.space, ratio, p, curve), p,
                                         whole);
                MediaImage m_sp(p);
                sp.store(m_sp, obj);
                for (int i = 0; i < 20; ++i) {
                    QueryRegion q{uint32_t(1 + rng() % 80), uint32_t(1 + rng() % 40),
                                  uint32_t(1 + rng() % 50), uint32_t(1 + rng() % 30)};
                    REQUIRE(check::spatial_mismatches(ids, m_sp, data.space, q, sp.compile(q)) == 0);
                    REQUIRE(check::spatial_mismatches(ids, m_ssy, data.space, q, ssy.compile(q)) == 0);
                }
            }
}
