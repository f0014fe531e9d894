#include "mems/rs_model.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace mems;

namespace {

// RS address to physical address by walking the media: regions row-major,
// sectors in column-prime order.
PhysAddr walk_rs_to_mems(RSAddr a, const DeviceParams& p,
                         const std::vector<oracle::Cell>& walk) {
    const uint32_t rx = (a.r - 1) % p.regions_x + 1;
    const uint32_t ry = (a.r - 1) / p.regions_x + 1;
    return {rx, ry, walk[a.s - 1].col, walk[a.s - 1].row};
}

}  // namespace

TEST_CASE("mapping examples") {
    const DeviceParams p = cmu_defaults();
    CHECK(rs_to_mems({1, 1}, p) == PhysAddr{1, 1, 1, 1});
    CHECK(rs_to_mems({81, 28}, p) == PhysAddr{1, 2, 2, 27});
    CHECK(rs_to_mems({6400, 67500}, p) == PhysAddr{80, 80, 2500, 1});
    CHECK(mems_to_rs({1, 1, 1, 1}, p) == RSAddr{1, 1});
    CHECK(mems_to_rs({1, 2, 2, 27}, p) == RSAddr{81, 28});
    CHECK_THROWS_AS(rs_to_mems({0, 1}, p), std::out_of_range);
    CHECK_THROWS_AS(rs_to_mems({6401, 1}, p), std::out_of_range);
    CHECK_THROWS_AS(rs_to_mems({1, 67501}, p), std::out_of_range);
    CHECK_THROWS_AS(mems_to_rs({81, 1, 1, 1}, p), std::out_of_range);
    CHECK_THROWS_AS(mems_to_rs({1, 1, 1, 28}, p), std::out_of_range);
}

TEST_CASE("exhaustive bijection on a small device") {
    const DeviceParams p = oracle::small_device(3, 3, 4, 3, 4);
    const auto walk = oracle::serpentine_walk(p.sectors_x, p.sectors_y);
    std::set<PhysAddr> seen;
    for (uint32_t r = 1; r <= p.num_regions(); ++r)
        for (uint32_t s = 1; s <= p.sectors_per_region(); ++s) {
            const PhysAddr a = rs_to_mems({r, s}, p);
            REQUIRE(a == walk_rs_to_mems({r, s}, p, walk));
            REQUIRE(mems_to_rs(a, p) == RSAddr{r, s});
            seen.insert(a);
        }
    CHECK(seen.size() == 108);
}

TEST_CASE("sampled bijection on the CMU device") {
    const DeviceParams p = cmu_defaults();
    const auto walk = oracle::serpentine_walk(p.sectors_x, p.sectors_y);
    std::mt19937_64 rng(23);
    for (int i = 0; i < 1000000; ++i) {
        const RSAddr a{uint32_t(1 + rng() % p.num_regions()),
                       uint32_t(1 + rng() % p.sectors_per_region())};
        const PhysAddr m = rs_to_mems(a, p);
        if (!(m == walk_rs_to_mems(a, p, walk)) || !(mems_to_rs(m, p) == a)) FAIL("mismatch");
        const PhysAddr q{uint32_t(1 + rng() % 80), uint32_t(1 + rng() % 80),
                         uint32_t(1 + rng() % 2500), uint32_t(1 + rng() % 27)};
        if (!(rs_to_mems(mems_to_rs(q, p), p) == q)) FAIL("inverse mismatch");
    }
}

TEST_CASE("consecutive sectors are physically adjacent") {
    const DeviceParams p = cmu_defaults();
    for (uint32_t s = 1; s < p.sectors_per_region(); ++s) {
        const PhysAddr a = rs_to_mems({1, s}, p), b = rs_to_mems({1, s + 1}, p);
        const bool same_col = a.s_x == b.s_x && (a.s_y + 1 == b.s_y || b.s_y + 1 == a.s_y);
        const bool next_col = b.s_x == a.s_x + 1 && a.s_y == b.s_y;
        REQUIRE((same_col || next_col));
    }
}

TEST_CASE("averaged parameters") {
    const RSParams rs = rs_params(cmu_defaults());
    CHECK(rs.transfer_rate_rs == doctest::Approx(4.32e6 / (4.32e6 / 0.7e6 + 2500 * 0.215e-3)));
    CHECK(rs.transfer_rate_rs / 1e6 == doctest::Approx(0.644).epsilon(1e-3));
    CHECK(rs.seek_time_rs == doctest::Approx(0.735e-3));
    CHECK(rs.max_active_tips == 1280);
    CHECK(seek_time_adj(cmu_defaults()) == cmu_defaults().settle_s);

    DeviceParams no_settle = cmu_defaults();
    no_settle.settle_s = 0;
    CHECK(rs_params(no_settle).transfer_rate_rs == no_settle.tip_rate_bps);

    DeviceParams y_bound = cmu_defaults();
    y_bound.move_y_s = 2e-3;
    CHECK(rs_params(y_bound).seek_time_rs == doctest::Approx(2.06e-3));
}

TEST_CASE("region reads split by the activation limit") {
    const DeviceParams p = cmu_defaults();
    auto regions = [](uint32_t n) {
        std::vector<uint32_t> v;
        for (uint32_t r = 1; r <= n; ++r) v.push_back(r);
        return v;
    };
    CHECK(rs_read(regions(64), 100, 64, p).scans.size() == 1);
    const AccessPlan three = rs_read(regions(3200), 1, 10, p);
    REQUIRE(three.scans.size() == 3);
    CHECK(three.scans[0].tips.size() == 1280);
    CHECK(three.scans[2].tips.size() == 640);
    CHECK(three.scans[2].tips.front() == 2561);
    CHECK(!three.scans[0].reverse);
    CHECK(three.scans[1].reverse);
    CHECK(!three.scans[2].reverse);
    CHECK(rs_read(regions(6400), 1, 10, p).scans.size() == 5);
    CHECK(rs_read({}, 1, 10, p).scans.empty());
    CHECK_THROWS_AS(rs_read(regions(4), 67500, 2, p), std::out_of_range);
    CHECK_THROWS_AS(rs_read({6401}, 1, 1, p), std::out_of_range);

    // Back-to-back passes over the same rows cost one turnaround each.
    Emulator emu(p);
    const Timing t = emu.execute(rs_read(regions(3200), 1, 20, p));
    CHECK(t.total_s == doctest::Approx(0.735e-3 + 60 * 64 / 0.7e6 + 2 * 0.06e-3));
}

TEST_CASE("full linearized region read time matches the averaged rate") {
    const DeviceParams p = cmu_defaults();
    Emulator emu(p);
    const Timing t = emu.execute(rs_read({1}, 1, p.sectors_per_region(), p));
    const double expect = 4.32e6 / rs_params(p).transfer_rate_rs;
    CHECK(std::abs(t.total_s - expect) / expect < 0.01);
}
