#pragma once

/// @file device_params.hpp
/// @brief Geometry and timing constants of a probe-based MEMS storage device.
///
/// Sizes are carried in bits and times in seconds throughout the library.
/// The text config format uses the device-sheet units instead (TransferRate
/// in Mbit/s, T_X/T_Y/T_S/T_T in ms) and the device-sheet symbol names as keys.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace mems {

enum class SeekModel {
    average,   ///< constant T_X / T_Y whenever the sled moves along that axis
    distance,  ///< move time proportional to distance, mean-calibrated to T_X / T_Y
};

std::string_view to_string(SeekModel m);
SeekModel parse_seek_model(std::string_view s);

struct DeviceParams {
    uint32_t regions_x = 80;          ///< R_x
    uint32_t regions_y = 80;          ///< R_y
    uint32_t sectors_x = 2500;        ///< S_x, columns per region
    uint32_t sectors_y = 27;          ///< S_y, tip sectors per column
    uint32_t max_active_tips = 1280;  ///< N_APT
    uint32_t sector_bits = 64;        ///< SectorSize
    double tip_rate_bps = 0.7e6;      ///< TransferRate per probe tip
    double move_x_s = 0.52e-3;        ///< T_X
    double move_y_s = 0.35e-3;        ///< T_Y
    double settle_s = 0.215e-3;       ///< T_S
    double turnaround_s = 0.06e-3;    ///< T_T
    SeekModel seek_model = SeekModel::average;

    uint32_t num_regions() const { return regions_x * regions_y; }         ///< N_R
    uint32_t sectors_per_region() const { return sectors_x * sectors_y; }  ///< N_S
    uint32_t num_tips() const { return num_regions(); }                    ///< N_PT

    /// Throws std::invalid_argument when a count or the transfer rate is zero,
    /// a delay is negative, or N_APT exceeds N_PT.
    void validate() const;

    bool operator==(const DeviceParams&) const = default;
};

struct DerivedParams {
    double region_bits = 0;         ///< S_x * S_y * SectorSize
    double sector_time_s = 0;       ///< SectorSize / TransferRate
    double region_read_time_s = 0;  ///< one tip, full region, column-prime order
};

/// The CMU device preset.
DeviceParams cmu_defaults();

DerivedParams derive(const DeviceParams& p);

std::string to_config_text(const DeviceParams& p);

/// Parses `key = value` lines; `#` starts a comment. Keys not present keep
/// their CMU default. N_R / N_S / N_PT may be given and must then agree with
/// the geometry.
DeviceParams parse_config_text(std::string_view text);
DeviceParams parse_config_text(std::string_view text, DeviceParams base);

DeviceParams load_config(const std::filesystem::path& path);
DeviceParams load_config(const std::filesystem::path& path, DeviceParams base);

}  // namespace mems
