#include "mems/rs_model.hpp"

#include <algorithm>
#include <stdexcept>

namespace mems {

PhysAddr rs_to_mems(RSAddr a, const DeviceParams& p) {
    if (a.r == 0 || a.r > p.num_regions() || a.s == 0 || a.s > p.sectors_per_region())
        throw std::out_of_range("RS address out of bounds");
    const SectorPos pos = sector_position(a.s, p);
    return {(a.r - 1) % p.regions_x + 1, (a.r - 1) / p.regions_x + 1, pos.col, pos.row};
}

RSAddr mems_to_rs(const PhysAddr& a, const DeviceParams& p) {
    if (a.r_x == 0 || a.r_x > p.regions_x || a.r_y == 0 || a.r_y > p.regions_y || a.s_x == 0 ||
        a.s_x > p.sectors_x || a.s_y == 0 || a.s_y > p.sectors_y)
        throw std::out_of_range("physical address out of bounds");
    const uint32_t in_col = (a.s_x % 2 == 1) ? a.s_y : p.sectors_y - a.s_y + 1;
    return {(a.r_y - 1) * p.regions_x + a.r_x, (a.s_x - 1) * p.sectors_y + in_col};
}

RSParams rs_params(const DeviceParams& p) {
    const DerivedParams d = derive(p);
    RSParams rs;
    rs.transfer_rate_rs =
        d.region_bits / (d.region_bits / p.tip_rate_bps + p.sectors_x * seek_time_adj(p));
    rs.seek_time_rs = std::max(p.move_x_s + p.settle_s, p.move_y_s + p.turnaround_s);
    rs.max_active_tips = p.max_active_tips;
    return rs;
}

AccessPlan rs_read(std::vector<uint32_t> regions, uint32_t s_start, uint32_t s_len,
                   const DeviceParams& p) {
    std::sort(regions.begin(), regions.end());
    regions.erase(std::unique(regions.begin(), regions.end()), regions.end());
    if (s_start == 0 || uint64_t(s_start) + s_len - 1 > p.sectors_per_region())
        throw std::out_of_range("rs_read rows out of bounds");
    if (!regions.empty() && (regions.front() == 0 || regions.back() > p.num_regions()))
        throw std::out_of_range("rs_read region out of bounds");
    AccessPlan plan;
    if (s_len == 0) return plan;
    for (size_t i = 0; i < regions.size(); i += p.max_active_tips) {
        Scan sc;
        const size_t end = std::min(regions.size(), i + p.max_active_tips);
        sc.tips.assign(regions.begin() + i, regions.begin() + end);
        sc.start = s_start;
        sc.length = s_len;
        sc.reverse = plan.scans.size() % 2 == 1;
        plan.scans.push_back(std::move(sc));
    }
    return plan;
}

}  // namespace mems
