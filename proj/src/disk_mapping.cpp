#include "mems/disk_mapping.hpp"

#include <stdexcept>
#include <string>

namespace mems {

LinearMap::LinearMap(DeviceParams p) : p_(p) {
    p_.validate();
    if (p_.num_tips() % p_.max_active_tips != 0)
        throw std::invalid_argument("linear block view needs N_PT divisible by N_APT");
    groups_ = p_.num_tips() / p_.max_active_tips;
}

bool LinearMap::forward(uint32_t col, uint32_t group) const {
    // With an even group count the last pass of a column runs opposite to
    // its first, so the next column starts in the opposite direction too.
    const bool first = (groups_ % 2 == 1) || (col % 2 == 1);
    return first != (group % 2 == 1);
}

RSAddr LinearMap::locate(uint64_t lba, uint32_t k) const {
    if (lba == 0 || lba > lba_count() || k >= p_.max_active_tips)
        throw std::out_of_range("block address out of range");
    const uint64_t i = lba - 1;
    const uint32_t sy = p_.sectors_y;
    const uint32_t col = uint32_t(i / (uint64_t(groups_) * sy)) + 1;
    const uint32_t group = uint32_t(i / sy % groups_);
    const uint32_t row = uint32_t(i % sy);
    const uint32_t s = forward(col, group) ? (col - 1) * sy + 1 + row : col * sy - row;
    return {group * p_.max_active_tips + k + 1, s};
}

AccessPlan LinearMap::lba_to_plan(uint64_t lba_start, uint64_t lba_len) const {
    AccessPlan plan;
    if (lba_len == 0) return plan;
    if (lba_start == 0 || lba_start + lba_len - 1 > lba_count())
        throw std::out_of_range("block range out of range");
    const uint32_t sy = p_.sectors_y;
    uint64_t i = lba_start - 1;
    const uint64_t end = i + lba_len;
    while (i < end) {
        const uint32_t col = uint32_t(i / (uint64_t(groups_) * sy)) + 1;
        const uint32_t group = uint32_t(i / sy % groups_);
        const uint32_t r0 = uint32_t(i % sy);
        const uint32_t r1 = uint32_t(std::min<uint64_t>(sy, r0 + (end - i)));  // exclusive
        const bool fwd = forward(col, group);
        const uint32_t lo = fwd ? (col - 1) * sy + 1 + r0 : col * sy - (r1 - 1);
        const uint32_t len = r1 - r0;

        Scan* prev = plan.scans.empty() ? nullptr : &plan.scans.back();
        const bool same_tips = prev && prev->tips.front() == group * p_.max_active_tips + 1;
        if (prev && same_tips && fwd && !prev->reverse && prev->last() + 1 == lo) {
            prev->length += len;  // one group: the pass runs on into the next column
        } else if (prev && same_tips && !fwd && prev->reverse && lo + len == prev->start) {
            prev->start = lo;
            prev->length += len;
        } else {
            Scan sc;
            sc.tips.resize(p_.max_active_tips);
            for (uint32_t t = 0; t < p_.max_active_tips; ++t)
                sc.tips[t] = group * p_.max_active_tips + t + 1;
            sc.start = lo;
            sc.length = len;
            sc.reverse = !fwd;
            plan.scans.push_back(std::move(sc));
        }
        i += len;
    }
    return plan;
}

namespace {

void write_split(MediaImage& media, const DeviceParams& p, const LinearMap& lin, uint64_t lba,
                 uint32_t first_k, uint32_t vs, std::span<const std::byte> bytes) {
    const size_t sb = p.sector_bits / 8;
    if (bytes.size() != sb * vs) throw std::invalid_argument("value size does not match attr_bits");
    for (uint32_t j = 0; j < vs; ++j)
        media.write(rs_to_mems(lin.locate(lba, first_k + j), p), bytes.subspan(j * sb, sb));
}

}  // namespace

NsmLayout::NsmLayout(RelationSchema schema, DeviceParams p) : schema_(schema), lin_(p) {
    vs_ = sectors_per_value(schema_, p);
    if (schema_.k == 0 || schema_.n == 0) throw std::invalid_argument("empty relation");
    per_block_ = p.max_active_tips / (schema_.k * vs_);
    if (per_block_ == 0) throw std::invalid_argument("tuple larger than a logical block");
    blocks_ = (uint64_t(schema_.n) + per_block_ - 1) / per_block_;
    if (blocks_ > lin_.lba_count())
        throw std::invalid_argument("relation of " + std::to_string(schema_.n) +
                                    " tuples exceeds device capacity");
}

RSAddr NsmLayout::map(uint32_t v, uint32_t w) const {
    if (v == 0 || v > schema_.n || w == 0 || w > schema_.k)
        throw std::out_of_range("attribute value index out of range");
    const uint32_t slot = (v - 1) % per_block_;
    return lin_.locate((v - 1) / per_block_ + 1, (slot * schema_.k + (w - 1)) * vs_);
}

AccessPlan NsmLayout::compile(const RangeQuery&) const { return lin_.lba_to_plan(1, blocks_); }

CostInput NsmLayout::k_values(const RangeQuery&) const {
    return {double(blocks_) * lin_.block_bits(), double(lin_.params().max_active_tips), 1.0};
}

void NsmLayout::store(MediaImage& media, const ValueFn& value) const {
    for (uint32_t v = 1; v <= schema_.n; ++v)
        for (uint32_t w = 1; w <= schema_.k; ++w) {
            const uint32_t slot = (v - 1) % per_block_;
            write_split(media, lin_.params(), lin_, (v - 1) / per_block_ + 1,
                        (slot * schema_.k + (w - 1)) * vs_, vs_, value(v, w));
        }
}

DsmLayout::DsmLayout(RelationSchema schema, DeviceParams p) : schema_(schema), lin_(p) {
    vs_ = sectors_per_value(schema_, p);
    if (schema_.k == 0 || schema_.n == 0) throw std::invalid_argument("empty relation");
    per_block_ = p.max_active_tips / vs_;
    if (per_block_ == 0) throw std::invalid_argument("value larger than a logical block");
    blocks_ = (uint64_t(schema_.n) + per_block_ - 1) / per_block_;
    if (blocks_ * schema_.k > lin_.lba_count())
        throw std::invalid_argument("relation of " + std::to_string(schema_.n) +
                                    " tuples exceeds device capacity");
}

RSAddr DsmLayout::map(uint32_t v, uint32_t w) const {
    if (v == 0 || v > schema_.n || w == 0 || w > schema_.k)
        throw std::out_of_range("attribute value index out of range");
    return lin_.locate(first_block(w) + (v - 1) / per_block_, (v - 1) % per_block_ * vs_);
}

AccessPlan DsmLayout::compile(const RangeQuery& q) const {
    AccessPlan plan;
    for (uint32_t w : q.projected) {
        if (w == 0 || w > schema_.k) throw std::invalid_argument("projected attribute out of range");
        AccessPlan part = lin_.lba_to_plan(first_block(w), blocks_);
        for (auto& sc : part.scans) plan.scans.push_back(std::move(sc));
    }
    return plan;
}

CostInput DsmLayout::k_values(const RangeQuery& q) const {
    return {double(blocks_) * q.projected.size() * lin_.block_bits(),
            double(lin_.params().max_active_tips), double(q.projected.size())};
}

void DsmLayout::store(MediaImage& media, const ValueFn& value) const {
    for (uint32_t w = 1; w <= schema_.k; ++w)
        for (uint32_t v = 1; v <= schema_.n; ++v)
            write_split(media, lin_.params(), lin_, first_block(w) + (v - 1) / per_block_,
                        (v - 1) % per_block_ * vs_, vs_, value(v, w));
}

}  // namespace mems
