#pragma once

/// @file spatial.hpp
/// @brief Layouts of a gridded two-dimensional object set and region-query
/// compilers.
///
/// Sequential layout (SSY): object (x, y) sits on tip r = x at row s = y;
/// spaces wider than N_PT are cut into vertical strips stacked along s.
/// Parallel layout (SP): the space is cut into B_x x B_y blocks with
/// B_x * B_y = N_R. Blocks are ordered along a space-filling curve and the
/// i-th block fills row group i; inside a block objects take tips row-major.

#include "mems/cost_model.hpp"
#include "mems/space_filling.hpp"

#include <functional>
#include <string_view>
#include <vector>

namespace mems {

struct SpatialSpace {
    uint32_t W = 6400;
    uint32_t H = 6400;
    uint32_t obj_bits = 64;
};

uint32_t sectors_per_object(const SpatialSpace& s, const DeviceParams& p);

struct QueryRegion {
    uint32_t x0 = 1;
    uint32_t y0 = 1;
    uint32_t qx = 1;
    uint32_t qy = 1;

    uint64_t size() const { return uint64_t(qx) * qy; }
    double aspect() const { return double(qx) / double(qy); }
    uint32_t x1() const { return x0 + qx - 1; }
    uint32_t y1() const { return y0 + qy - 1; }
};

/// Intersection with the space; qx = qy = 0 when empty.
QueryRegion clip(const QueryRegion& q, const SpatialSpace& s);

struct WorkloadProfile {
    struct Entry {
        double f = 1;
        uint32_t qx = 1;
        uint32_t qy = 1;
    };
    std::vector<Entry> entries;

    /// sum(f * qx) / sum(f * qy)
    double weighted_aspect() const;
};

/// One `f qx qy` triple per line; `#` comments allowed.
WorkloadProfile parse_profile(std::string_view text);

struct BlockGrid {
    uint32_t bx = 1, by = 1;  ///< block extent in objects
    uint32_t gx = 1, gy = 1;  ///< grid extent in blocks
    Curve curve = Curve::hilbert;
    std::vector<std::pair<uint32_t, uint32_t>> order;  ///< block (bx, by) by position
    std::vector<uint32_t> position;                    ///< 1-based position of block (i, j)

    uint32_t n_blocks() const { return gx * gy; }
    uint32_t position_of(uint32_t i, uint32_t j) const { return position[(j - 1) * gx + (i - 1)]; }
};

/// Factor pairs (B_x, B_y) of n with B_x / B_y a power of two, widest first.
std::vector<std::pair<uint32_t, uint32_t>> block_shapes(uint32_t n);

/// Picks the shape closest to `ratio` in log scale; ties go to the wider one.
BlockGrid build_block_grid(const SpatialSpace& s, double ratio, const DeviceParams& p,
                           Curve c = Curve::hilbert);
BlockGrid build_block_grid(const SpatialSpace& s, const WorkloadProfile& profile,
                           const DeviceParams& p, Curve c = Curve::hilbert);

/// Supplies the bytes of object (x, y); must return obj_bits / 8 bytes.
using ObjectFn = std::function<std::vector<std::byte>(uint32_t x, uint32_t y)>;

class SpatialLayoutSSY {
public:
    SpatialLayoutSSY(SpatialSpace s, DeviceParams p);

    RSAddr map(uint32_t x, uint32_t y) const;
    /// Direct object-to-physical formula for a single strip (W <= N_PT);
    /// serves as an oracle for map.
    PhysAddr map_phys(uint32_t x, uint32_t y) const;

    AccessPlan compile(const QueryRegion& q) const;
    CostInput k_values(const QueryRegion& q) const;
    void store(MediaImage& media, const ObjectFn& obj) const;

private:
    SpatialSpace s_;
    DeviceParams p_;
    uint32_t vs_;
};

class SpatialLayoutSP {
public:
    SpatialLayoutSP(SpatialSpace s, BlockGrid grid, DeviceParams p, bool whole_group_reads = false);

    const BlockGrid& grid() const { return grid_; }
    RSAddr map(uint32_t x, uint32_t y) const;

    /// Positions of the blocks overlapping q, ascending.
    std::vector<uint32_t> query_blocks(const QueryRegion& q) const;

    AccessPlan compile(const QueryRegion& q) const;
    /// k_random counts the separate runs of consecutive block positions;
    /// k_parallel is the average active tips per row-step of the plan.
    CostInput k_values(const QueryRegion& q) const;
    void store(MediaImage& media, const ObjectFn& obj) const;

private:
    SpatialSpace s_;
    BlockGrid grid_;
    DeviceParams p_;
    uint32_t vs_;
    bool whole_;
};

}  // namespace mems
