#pragma once

/// @file rs_model.hpp
/// @brief Region-Sector view of the device: two-parameter addressing and the
/// averaged per-tip transfer rate and random seek time.
///
/// Axis r enumerates regions row-major (r = (r_y-1)*R_x + r_x). Axis s
/// enumerates the sectors of one region in column-prime order, so consecutive
/// s values are either neighbours in one column or the same row of adjacent
/// columns.

#include "mems/emulator.hpp"

#include <vector>

namespace mems {

struct RSAddr {
    uint32_t r = 1;
    uint32_t s = 1;
    auto operator<=>(const RSAddr&) const = default;
};

PhysAddr rs_to_mems(RSAddr a, const DeviceParams& p);
RSAddr mems_to_rs(const PhysAddr& a, const DeviceParams& p);

struct RSParams {
    double transfer_rate_rs = 0;  ///< bits/s per tip, column-prime average
    double seek_time_rs = 0;      ///< average random seek, seconds
    uint32_t max_active_tips = 0;
};

/// Seek between adjacent columns at the same row: the settle alone.
inline double seek_time_adj(const DeviceParams& p) { return p.settle_s; }

RSParams rs_params(const DeviceParams& p);

/// Reads rows [s_start, s_start+s_len-1] of every region in `regions`.
/// Regions are taken in ascending order, N_APT per scan; successive scans
/// alternate direction so each starts where the previous one ended.
AccessPlan rs_read(std::vector<uint32_t> regions, uint32_t s_start, uint32_t s_len,
                   const DeviceParams& p);

}  // namespace mems
