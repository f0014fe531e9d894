#pragma once

/// @file emulator.hpp
/// @brief Timing emulator for the media sled of a MEMS storage device.
///
/// The emulator consumes an AccessPlan, an ordered list of scans. A scan is
/// one seek followed by a run of row-steps along the column-prime
/// (serpentine) order of the regions; every row-step transfers one tip sector
/// on each active tip in parallel and costs one sector time. Rows are named
/// by their linearized sector index s in [1, N_S], which is the same for all
/// regions because every tip sits at the same in-region offset.

#include "mems/device_params.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace mems {

/// Physical tip-sector address <r_x, r_y, s_x, s_y>, all 1-based.
struct PhysAddr {
    uint32_t r_x = 1;
    uint32_t r_y = 1;
    uint32_t s_x = 1;
    uint32_t s_y = 1;
    auto operator<=>(const PhysAddr&) const = default;
};

/// In-region sled position of linearized sector s: column s_x and
/// physical row s_y (even columns run bottom-up).
struct SectorPos {
    uint32_t col = 1;
    uint32_t row = 1;
    bool operator==(const SectorPos&) const = default;
};

SectorPos sector_position(uint32_t s, const DeviceParams& p);

enum class YDir : int8_t { down = -1, none = 0, up = 1 };

struct SledState {
    uint32_t col = 1;
    uint32_t row = 1;
    YDir y_dir = YDir::up;
    /// False until the first seek; the first seek of an emulator is charged
    /// the full average random seek.
    bool positioned = false;
};

/// Physical Y direction of a transfer through column `col` when the scan walks
/// s upward (`reverse == false`) or downward.
YDir transfer_direction(uint32_t col, bool reverse);

struct Scan {
    /// Active tips (1-based region indices), sorted and unique.
    std::vector<uint32_t> tips;
    uint32_t start = 1;   ///< first (lowest) linearized row
    uint32_t length = 0;  ///< number of consecutive rows
    bool reverse = false; ///< walk rows from start+length-1 down to start
    /// Optional per-row activation sets, indexed by row offset from `start`
    /// (ascending s, independent of `reverse`). When present it replaces
    /// `tips` row by row; each set holds at most N_APT tips.
    std::vector<std::vector<uint32_t>> per_row_tips;

    std::span<const uint32_t> row_tips(uint32_t offset) const {
        return per_row_tips.empty() ? std::span<const uint32_t>(tips)
                                    : std::span<const uint32_t>(per_row_tips[offset]);
    }
    uint32_t last() const { return start + length - 1; }
    bool operator==(const Scan&) const = default;
};

struct AccessPlan {
    std::vector<Scan> scans;
    bool operator==(const AccessPlan&) const = default;
};

/// Throws std::invalid_argument when a scan violates the device bounds or
/// the activation limit.
void validate(const AccessPlan& plan, const DeviceParams& p);

struct Timing {
    double total_s = 0;
    double seek_s = 0;        ///< sled move time of scan-start seeks
    double transfer_s = 0;
    double settle_s = 0;      ///< settles, including column-prime column crossings
    double turnaround_s = 0;
    uint64_t n_seeks = 0;     ///< one per scan
    uint64_t n_row_steps = 0;
    uint64_t sectors = 0;     ///< tip sectors transferred
    /// Seek time spent repositioning the sled at scan starts. In-place
    /// turnarounds and adjacent-column continuations are excluded.
    double reposition_s = 0;
    uint64_t n_repositions = 0;

    Timing& operator+=(const Timing& o);
};

/// Cost of one seek, split by component. `kind` tells what the sled did.
struct SeekCost {
    enum class Kind { none, turnaround, adjacent_column, reposition };
    double move_s = 0;
    double settle_s = 0;
    double turnaround_s = 0;
    Kind kind = Kind::none;
    double total() const { return move_s + settle_s + turnaround_s; }
};

/// Seek from `from` to (`to.col`, `to.row`) ready to transfer in direction
/// `dir`: MAX(move_x + settle, move_y + turnaround). Settle applies only when
/// the column changes and turnaround only when `dir` opposes the current Y
/// direction. A one-column step that keeps the physical row is charged the
/// settle alone. An unpositioned sled pays the full average random seek.
SeekCost seek_cost(const SledState& from, SectorPos to, YDir dir, const DeviceParams& p);

inline double seek_time(const SledState& from, SectorPos to, YDir dir, const DeviceParams& p) {
    return seek_cost(from, to, dir, p).total();
}

/// Byte image of the whole medium, addressed physically.
class MediaImage {
public:
    explicit MediaImage(const DeviceParams& p);

    const DeviceParams& params() const { return params_; }
    size_t sector_bytes() const { return sector_bytes_; }

    void write(const PhysAddr& a, std::span<const std::byte> data);
    std::span<const std::byte> sector(const PhysAddr& a) const;

private:
    size_t offset(const PhysAddr& a) const;

    DeviceParams params_;
    size_t sector_bytes_;
    std::vector<std::byte> bytes_;
};

/// Single-threaded state machine over the sled; one instance per stream.
class Emulator {
public:
    explicit Emulator(DeviceParams p);

    const DeviceParams& params() const { return params_; }
    const SledState& state() const { return state_; }
    void reset(SledState s = {}) { state_ = s; }

    Timing execute(const AccessPlan& plan);

    /// Same timing as execute; also returns the sector bytes of every touched
    /// (tip, row) cell in scan order, tips ascending within a row-step.
    std::pair<Timing, std::vector<std::byte>> read(const AccessPlan& plan, const MediaImage& media);

private:
    template <class OnRow>
    Timing run(const AccessPlan& plan, OnRow&& on_row);

    DeviceParams params_;
    double sector_time_s_;
    SledState state_;
};

}  // namespace mems
