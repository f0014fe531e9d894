#include "mems/cost_model.hpp"

#include <stdexcept>

namespace mems {

CostEstimate estimate(const CostInput& c, const RSParams& rs) {
    if (!(c.k_parallel > 0)) throw std::invalid_argument("k_parallel must be positive");
    if (!(c.k_random >= 0)) throw std::invalid_argument("k_random must not be negative");
    CostEstimate e;
    e.transfer_s = c.retrieval_data_bits / (rs.transfer_rate_rs * c.k_parallel);
    e.seek_s = rs.seek_time_rs * c.k_random;
    e.total_s = e.transfer_s + e.seek_s;
    return e;
}

CostEstimate lower_bound(double bits, const RSParams& rs) {
    return estimate({bits, double(rs.max_active_tips), 0.0}, rs);
}

CostInput cost_input_from_trace(const Timing& t, const DeviceParams& p, const RSParams& rs) {
    CostInput c;
    c.retrieval_data_bits = double(t.sectors) * p.sector_bits;
    c.k_parallel = t.n_row_steps ? double(t.sectors) / double(t.n_row_steps)
                                 : double(p.max_active_tips);
    if (c.k_parallel <= 0) c.k_parallel = 1;  // row-steps with no active tip
    c.k_random = rs.seek_time_rs > 0 ? t.reposition_s / rs.seek_time_rs : double(t.n_repositions);
    return c;
}

}  // namespace mems
