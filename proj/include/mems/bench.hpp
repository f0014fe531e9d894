#pragma once

/// @file bench.hpp
/// @brief Experiment sweeps over the relational and spatial placements.
///
/// Each sweep point runs `repeats` independent seeds on a fresh emulator
/// (sled unpositioned) and reports the mean of every measured field. The
/// estimate column evaluates the analytic cost model on the cost inputs
/// measured from the same trace; the lower-bound column applies the ideal
/// placement to the bits of the query result.

#include "mems/disk_mapping.hpp"
#include "mems/spatial.hpp"
#include "mems/workload.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mems {

inline const std::vector<std::string> kRelationalPlacements = {
    "relational-parallel", "relational-sequential-yu", "relational-lowerbound", "nsm-griffin",
    "dsm-griffin"};
inline const std::vector<std::string> kSpatialPlacements = {
    "spatial-parallel", "spatial-sequential-yu", "spatial-lowerbound"};

struct BenchRow {
    std::string experiment;
    std::string placement;
    double sweep = 0;  ///< value of the swept variable, for ordering
    // relational
    double data_mb = 0;
    uint32_t n_projection = 0;
    double selectivity = 0;
    // spatial
    double query_size = 0;
    double aspect = 0;
    double qx = 0, qy = 0;
    double n_query_blocks = 0;
    // measured means
    double meas_total_s = 0;
    double est_total_s = 0;
    double lb_total_s = 0;
    double seek_s = 0;  ///< all non-transfer time: seeks, settles, turnarounds
    double transfer_s = 0;
    double scans = 0;
    double k_parallel = 0;
    double k_random = 0;
    uint64_t seed = 0;
    /// Smallest meas - lower bound over the repeats (not written to CSV).
    double min_lb_margin_s = 0;
};

struct RelationalConfig {
    DeviceParams device;
    std::vector<std::string> placements = kRelationalPlacements;
    bool experiment1 = true;
    bool experiment2 = true;
    std::vector<double> sizes_mb = {5, 10, 20, 40, 80, 160, 320};  ///< experiment 1
    uint32_t exp1_nproj = 8;
    std::vector<uint32_t> nproj = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
    double exp2_size_mb = 320;
    double selectivity = 0.1;
    uint32_t k = 16;
    uint32_t attr_bytes = 8;
    Qualifying qualifying = Qualifying::uniform;
    uint64_t seed = 1;
    uint32_t repeats = 20;
};

struct SpatialConfig {
    DeviceParams device;
    std::vector<std::string> placements = kSpatialPlacements;
    bool experiment3 = true;
    bool experiment4 = true;
    std::vector<double> query_sizes = {0.0001, 0.001, 0.01, 0.1};  ///< experiment 3, fractions
    std::vector<double> aspects = {16, 8, 4, 2, 1, 0.5, 0.25, 0.125, 0.0625};
    double exp4_size = 0.01;
    uint64_t objects = 40960000;
    uint32_t obj_bytes = 8;
    Curve curve = Curve::hilbert;
    /// Fixed block aspect ratio; by default each sweep point tunes the grid
    /// to its own query shape.
    std::optional<double> block_ratio;
    WorkloadProfile profile;  ///< used instead of the query shape when non-empty
    bool whole_group_reads = false;
    uint64_t seed = 1;
    uint32_t repeats = 20;
};

std::vector<BenchRow> run_relational(const RelationalConfig& cfg);
std::vector<BenchRow> run_spatial(const SpatialConfig& cfg);

/// Orders rows by (experiment, placement, swept variable).
void sort_rows(std::vector<BenchRow>& rows);

void write_relational_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void write_spatial_csv(std::ostream& out, const std::vector<BenchRow>& rows);

/// Parses "1/16" or "0.0625".
double parse_ratio(const std::string& s);

}  // namespace mems
