#include "mems/cost_model.hpp"

#include <doctest.h>

using namespace mems;

TEST_CASE("estimate examples") {
    const RSParams rs = rs_params(cmu_defaults());
    const double bits = 1e9;
    const CostEstimate lb = estimate({bits, 1280, 0}, rs);
    CHECK(lb.total_s == doctest::Approx(bits / (rs.transfer_rate_rs * 1280)));
    CHECK(lb.seek_s == 0.0);

    const CostEstimate none = estimate({0, 100, 3}, rs);
    CHECK(none.total_s == doctest::Approx(3 * 0.735e-3));
    CHECK(none.transfer_s == 0.0);

    const CostEstimate a = estimate({bits, 200, 1}, rs), b = estimate({bits, 400, 1}, rs);
    CHECK(b.transfer_s == doctest::Approx(a.transfer_s / 2));
    CHECK(a.total_s == doctest::Approx(a.transfer_s + a.seek_s));

    CHECK_THROWS_AS(estimate({bits, 0, 1}, rs), std::invalid_argument);
    CHECK_THROWS_AS(estimate({bits, 10, -1}, rs), std::invalid_argument);
}

TEST_CASE("lower bound") {
    const RSParams rs = rs_params(cmu_defaults());
    CHECK(lower_bound(0, rs).total_s == 0.0);
    const double bits = 320.0 * 1024 * 1024 * 8;
    CHECK(lower_bound(bits, rs).total_s == doctest::Approx(bits / (0.6439e6 * 1280)).epsilon(1e-3));
    CHECK(lower_bound(bits, rs).total_s == doctest::Approx(3.26).epsilon(5e-3));
}

TEST_CASE("estimate monotonicity") {
    const RSParams rs = rs_params(cmu_defaults());
    for (double k = 1; k < 1280; k *= 1.7) {
        CHECK(estimate({1e6, k * 1.7, 2}, rs).total_s < estimate({1e6, k, 2}, rs).total_s);
        CHECK(estimate({1e6, k, 3}, rs).total_s > estimate({1e6, k, 2}, rs).total_s);
        CHECK(estimate({2e6, k, 2}, rs).total_s > estimate({1e6, k, 2}, rs).total_s);
    }
}

TEST_CASE("cost inputs from a trace") {
    const DeviceParams p = cmu_defaults();
    const RSParams rs = rs_params(p);
    Timing t;
    t.sectors = 3000;
    t.n_row_steps = 10;
    t.reposition_s = 2 * rs.seek_time_rs;
    const CostInput c = cost_input_from_trace(t, p, rs);
    CHECK(c.k_parallel == doctest::Approx(300));
    CHECK(c.k_random == doctest::Approx(2));
    CHECK(c.retrieval_data_bits == 3000.0 * 64);
    CHECK(cost_input_from_trace(Timing{}, p, rs).k_parallel == 1280);
}
