#pragma once

/// @file disk_mapping.hpp
/// @brief Linear block view of the device and the row-store / column-store
/// baselines laid out on it.
///
/// The N_PT tips are cut into G = N_PT / N_APT fixed tip groups of
/// consecutive region index. A logical block is one row of one tip group
/// (N_APT tip sectors). Block order runs through the S_y rows of group 1 in
/// column 1, then group 2 in column 1, ... group G, then column 2. Passes
/// over one column alternate direction so each starts where the previous
/// one stopped.

#include "mems/relational.hpp"

namespace mems {

class LinearMap {
public:
    explicit LinearMap(DeviceParams p);

    const DeviceParams& params() const { return p_; }
    uint32_t tip_groups() const { return groups_; }
    uint64_t lba_count() const { return uint64_t(groups_) * p_.sectors_per_region(); }
    uint64_t block_bits() const { return uint64_t(p_.max_active_tips) * p_.sector_bits; }

    /// Address of the k-th tip sector (0-based) of block `lba` (1-based).
    RSAddr locate(uint64_t lba, uint32_t k) const;

    AccessPlan lba_to_plan(uint64_t lba_start, uint64_t lba_len) const;

private:
    bool forward(uint32_t col, uint32_t group) const;

    DeviceParams p_;
    uint32_t groups_;
};

/// Row store: whole tuples packed into blocks, floor(block_bits / tuple_bits)
/// per block, starting at block 1.
class NsmLayout {
public:
    NsmLayout(RelationSchema schema, DeviceParams p);

    uint32_t tuples_per_block() const { return per_block_; }
    uint64_t blocks() const { return blocks_; }

    RSAddr map(uint32_t v, uint32_t w) const;
    /// Reads every block of the relation.
    AccessPlan compile(const RangeQuery& q) const;
    CostInput k_values(const RangeQuery& q) const;
    void store(MediaImage& media, const ValueFn& value) const;

private:
    RelationSchema schema_;
    LinearMap lin_;
    uint32_t vs_;
    uint32_t per_block_;
    uint64_t blocks_;
};

/// Column store: one sub-relation per attribute, packed
/// floor(block_bits / attr_bits) values per block, sub-relations back to back.
class DsmLayout {
public:
    DsmLayout(RelationSchema schema, DeviceParams p);

    uint32_t values_per_block() const { return per_block_; }
    uint64_t blocks_per_attr() const { return blocks_; }
    uint64_t first_block(uint32_t w) const { return (w - 1) * blocks_ + 1; }

    RSAddr map(uint32_t v, uint32_t w) const;
    /// Reads every block of each projected sub-relation.
    AccessPlan compile(const RangeQuery& q) const;
    CostInput k_values(const RangeQuery& q) const;
    void store(MediaImage& media, const ValueFn& value) const;

private:
    RelationSchema schema_;
    LinearMap lin_;
    uint32_t vs_;
    uint32_t per_block_;
    uint64_t blocks_;
};

}  // namespace mems
