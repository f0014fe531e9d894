#pragma once

/// @file relational.hpp
/// @brief Relational layouts over the Region-Sector view and their
/// query compilers.
///
/// Sequential layout (RSY): the k attribute values of m = floor(N_R / k)
/// tuples share one simultaneous-access row, tuple after tuple along r.
/// Parallel layout (RP): each attribute owns a band of h = ceil(n / N_PT)
/// rows; the values of one attribute for N_PT consecutive tuples fill a row.
///
/// Tuples v and attributes w are 1-based. A value spanning several tip
/// sectors occupies consecutive s at the same r; `map` returns its first
/// sector.

#include "mems/cost_model.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mems {

struct RelationSchema {
    uint32_t k = 16;        ///< attribute count
    uint32_t attr_bits = 64;
    uint32_t n = 1;         ///< tuple count
};

/// Tip sectors per attribute value. attr_bits must be a multiple of the
/// sector size.
uint32_t sectors_per_value(const RelationSchema& s, const DeviceParams& p);

struct RangeQuery {
    std::vector<uint32_t> projected;  ///< attribute indices, ascending
    uint32_t predicate_attr = 1;
    uint64_t bound = 0;               ///< attr_pred > bound qualifies
    double selectivity = 0;
};

/// Projects attr_1..attr_np with the predicate on attr_1.
RangeQuery make_range_query(uint32_t n_projection, double selectivity, uint64_t bound = 0);

/// Supplies the bytes of value (v, w); must return attr_bits / 8 bytes.
using ValueFn = std::function<std::vector<std::byte>(uint32_t v, uint32_t w)>;

class RelLayoutRSY {
public:
    RelLayoutRSY(RelationSchema schema, DeviceParams p);

    const RelationSchema& schema() const { return schema_; }
    uint32_t m() const { return m_; }
    uint32_t rows_used() const { return rows_used_; }  ///< row groups, one per m tuples

    RSAddr map(uint32_t v, uint32_t w) const;
    /// Direct tuple-to-physical formula; serves as an oracle for map.
    PhysAddr map_phys(uint32_t v, uint32_t w) const;

    /// Reads the projected attributes of every tuple; selectivity is ignored.
    AccessPlan compile(const RangeQuery& q) const;
    CostInput k_values(const RangeQuery& q) const;

    void store(MediaImage& media, const ValueFn& value) const;

private:
    void check(uint32_t v, uint32_t w) const;

    RelationSchema schema_;
    DeviceParams p_;
    uint32_t vs_;
    uint32_t m_;
    uint32_t rows_used_;
};

class RelLayoutRP {
public:
    RelLayoutRP(RelationSchema schema, DeviceParams p);

    const RelationSchema& schema() const { return schema_; }
    uint32_t band_rows() const { return h_; }  ///< h, in value rows
    uint32_t band_start(uint32_t w) const;      ///< first s of attribute w's band

    RSAddr map(uint32_t v, uint32_t w) const;

    /// Reads the predicate band in full and, for every other projected
    /// attribute, only the values of `qualifying` tuples (sorted tuple ids).
    AccessPlan compile(const RangeQuery& q, std::span<const uint32_t> qualifying) const;
    CostInput k_values(const RangeQuery& q) const;

    void store(MediaImage& media, const ValueFn& value) const;

private:
    void check(uint32_t v, uint32_t w) const;

    RelationSchema schema_;
    DeviceParams p_;
    uint32_t vs_;
    uint32_t h_;
};

}  // namespace mems
