#pragma once

/// @file cost_model.hpp
/// @brief Analytic retrieval-time estimate from data volume, average tip
/// parallelism and average seek count.

#include "mems/rs_model.hpp"

namespace mems {

struct CostInput {
    double retrieval_data_bits = 0;
    double k_parallel = 1;  ///< average active tips per row-step, in (0, N_APT]
    double k_random = 0;    ///< average number of random seeks
};

struct CostEstimate {
    double total_s = 0;
    double transfer_s = 0;
    double seek_s = 0;
};

/// total = bits / (TransferRate_rs * k_parallel) + SeekTime_rs * k_random.
/// Throws std::invalid_argument for k_parallel <= 0 or k_random < 0.
CostEstimate estimate(const CostInput& c, const RSParams& rs);

/// Ideal placement: every row-step uses N_APT tips and no seek is paid.
CostEstimate lower_bound(double bits, const RSParams& rs);

/// Cost inputs measured from an emulator trace: k_parallel is sectors per
/// row-step and k_random is the repositioning time expressed in average
/// random seeks. The data volume is the transferred tip sectors.
CostInput cost_input_from_trace(const Timing& t, const DeviceParams& p, const RSParams& rs);

}  // namespace mems
