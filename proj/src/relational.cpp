#include "mems/relational.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mems {

namespace {

uint32_t ceil_div(uint64_t a, uint64_t b) { return uint32_t((a + b - 1) / b); }

void write_value(MediaImage& media, const DeviceParams& p, uint32_t r, uint32_t s, uint32_t vs,
                 std::span<const std::byte> bytes) {
    const size_t sb = p.sector_bits / 8;
    if (bytes.size() != sb * vs) throw std::invalid_argument("value size does not match attr_bits");
    for (uint32_t j = 0; j < vs; ++j)
        media.write(rs_to_mems({r, s + j}, p), bytes.subspan(j * sb, sb));
}

}  // namespace

uint32_t sectors_per_value(const RelationSchema& s, const DeviceParams& p) {
    if (s.attr_bits == 0 || s.attr_bits % p.sector_bits != 0)
        throw std::invalid_argument("attr_bits must be a positive multiple of the sector size");
    return s.attr_bits / p.sector_bits;
}

RangeQuery make_range_query(uint32_t n_projection, double selectivity, uint64_t bound) {
    if (n_projection == 0) throw std::invalid_argument("N_projection must be at least 1");
    if (!(selectivity >= 0 && selectivity <= 1))
        throw std::invalid_argument("selectivity must be in [0, 1]");
    RangeQuery q;
    for (uint32_t w = 1; w <= n_projection; ++w) q.projected.push_back(w);
    q.predicate_attr = 1;
    q.bound = bound;
    q.selectivity = selectivity;
    return q;
}

static void check_query(const RangeQuery& q, const RelationSchema& s) {
    if (q.projected.empty()) throw std::invalid_argument("query projects nothing");
    if (!std::is_sorted(q.projected.begin(), q.projected.end()) ||
        std::adjacent_find(q.projected.begin(), q.projected.end()) != q.projected.end())
        throw std::invalid_argument("projected attributes must be ascending and unique");
    if (q.projected.front() == 0 || q.projected.back() > s.k)
        throw std::invalid_argument("projected attribute out of range");
    if (!std::binary_search(q.projected.begin(), q.projected.end(), q.predicate_attr))
        throw std::invalid_argument("predicate attribute must be projected");
}

// ---- sequential layout -------------------------------------------------------

RelLayoutRSY::RelLayoutRSY(RelationSchema schema, DeviceParams p) : schema_(schema), p_(p) {
    p_.validate();
    vs_ = sectors_per_value(schema_, p_);
    if (schema_.k == 0 || schema_.n == 0) throw std::invalid_argument("empty relation");
    if (schema_.k > p_.num_regions())
        throw std::invalid_argument("k exceeds the number of regions");
    m_ = p_.num_regions() / schema_.k;
    rows_used_ = ceil_div(schema_.n, m_);
    if (uint64_t(rows_used_) * vs_ > p_.sectors_per_region())
        throw std::invalid_argument("relation of " + std::to_string(schema_.n) +
                                    " tuples exceeds device capacity");
}

void RelLayoutRSY::check(uint32_t v, uint32_t w) const {
    if (v == 0 || v > schema_.n || w == 0 || w > schema_.k)
        throw std::out_of_range("attribute value index out of range");
}

RSAddr RelLayoutRSY::map(uint32_t v, uint32_t w) const {
    check(v, w);
    return {schema_.k * ((v - 1) % m_) + w, (ceil_div(v, m_) - 1) * vs_ + 1};
}

PhysAddr RelLayoutRSY::map_phys(uint32_t v, uint32_t w) const {
    check(v, w);
    const uint32_t pos = schema_.k * ((v - 1) % m_) + w;
    const uint32_t row = (ceil_div(v, m_) - 1) * vs_ + 1;
    PhysAddr a;
    a.r_x = (pos - 1) % p_.regions_x + 1;
    a.r_y = ceil_div(pos, p_.regions_x);
    a.s_x = ceil_div(row, p_.sectors_y);
    a.s_y = (a.s_x % 2 == 1) ? (row - 1) % p_.sectors_y + 1
                             : p_.sectors_y - (row - 1) % p_.sectors_y;
    return a;
}

AccessPlan RelLayoutRSY::compile(const RangeQuery& q) const {
    check_query(q, schema_);
    // Tuples in the last row group; slots past it hold no data there.
    const uint32_t last_fill = schema_.n - (rows_used_ - 1) * m_;
    std::vector<uint32_t> tips;
    tips.reserve(size_t(m_) * q.projected.size());
    for (uint32_t i = 0; i < m_; ++i)
        for (uint32_t w : q.projected) tips.push_back(schema_.k * i + w);

    AccessPlan plan;
    for (size_t i = 0; i < tips.size(); i += p_.max_active_tips) {
        Scan sc;
        sc.tips.assign(tips.begin() + i,
                       tips.begin() + std::min(tips.size(), i + p_.max_active_tips));
        uint32_t groups = rows_used_;
        if ((sc.tips.front() - 1) / schema_.k >= last_fill) --groups;
        if (groups == 0) continue;
        sc.start = 1;
        sc.length = groups * vs_;
        sc.reverse = plan.scans.size() % 2 == 1;
        plan.scans.push_back(std::move(sc));
    }
    return plan;
}

CostInput RelLayoutRSY::k_values(const RangeQuery& q) const {
    check_query(q, schema_);
    CostInput c;
    c.retrieval_data_bits = double(schema_.n) * q.projected.size() * schema_.attr_bits;
    c.k_parallel = std::min<double>(double(m_) * q.projected.size(), p_.max_active_tips);
    c.k_random = 1;
    return c;
}

void RelLayoutRSY::store(MediaImage& media, const ValueFn& value) const {
    for (uint32_t v = 1; v <= schema_.n; ++v)
        for (uint32_t w = 1; w <= schema_.k; ++w) {
            const RSAddr a = map(v, w);
            write_value(media, p_, a.r, a.s, vs_, value(v, w));
        }
}

// ---- parallel layout ---------------------------------------------------------

RelLayoutRP::RelLayoutRP(RelationSchema schema, DeviceParams p) : schema_(schema), p_(p) {
    p_.validate();
    vs_ = sectors_per_value(schema_, p_);
    if (schema_.k == 0 || schema_.n == 0) throw std::invalid_argument("empty relation");
    h_ = ceil_div(schema_.n, p_.num_tips());
    if (uint64_t(schema_.k) * h_ * vs_ > p_.sectors_per_region())
        throw std::invalid_argument("relation of " + std::to_string(schema_.n) +
                                    " tuples exceeds device capacity");
}

void RelLayoutRP::check(uint32_t v, uint32_t w) const {
    if (v == 0 || v > schema_.n || w == 0 || w > schema_.k)
        throw std::out_of_range("attribute value index out of range");
}

uint32_t RelLayoutRP::band_start(uint32_t w) const {
    if (w == 0 || w > schema_.k) throw std::out_of_range("attribute index out of range");
    return (w - 1) * h_ * vs_ + 1;
}

RSAddr RelLayoutRP::map(uint32_t v, uint32_t w) const {
    check(v, w);
    const uint32_t npt = p_.num_tips();
    return {(v - 1) % npt + 1, band_start(w) + (ceil_div(v, npt) - 1) * vs_};
}

AccessPlan RelLayoutRP::compile(const RangeQuery& q, std::span<const uint32_t> qualifying) const {
    check_query(q, schema_);
    const uint32_t npt = p_.num_tips();
    const uint32_t napt = p_.max_active_tips;
    AccessPlan plan;

    // Predicate band: every tuple, one tip group per pass.
    {
        const uint32_t used_tips = std::min(schema_.n, npt);
        const uint32_t last_fill = schema_.n - (h_ - 1) * npt;
        bool reverse = false;
        for (uint32_t lo = 1; lo <= used_tips; lo += napt) {
            Scan sc;
            for (uint32_t t = lo; t < lo + napt && t <= used_tips; ++t) sc.tips.push_back(t);
            sc.start = band_start(q.predicate_attr);
            sc.length = (lo > last_fill ? h_ - 1 : h_) * vs_;
            if (sc.length == 0) continue;
            sc.reverse = reverse;
            reverse = !reverse;
            plan.scans.push_back(std::move(sc));
        }
    }

    // Qualifying tips per value row of a band.
    std::vector<std::vector<uint32_t>> row_tips(h_);
    for (uint32_t v : qualifying) {
        if (v == 0 || v > schema_.n) throw std::out_of_range("qualifying tuple out of range");
        row_tips[(v - 1) / npt].push_back((v - 1) % npt + 1);
    }
    size_t max_passes = 0;
    for (auto& t : row_tips) {
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
        max_passes = std::max(max_passes, (t.size() + napt - 1) / napt);
    }

    for (uint32_t w : q.projected) {
        if (w == q.predicate_attr) continue;
        bool reverse = false;
        for (size_t pass = 0; pass < max_passes; ++pass) {
            const size_t lo = pass * napt;
            std::vector<Scan> runs;
            uint32_t j = 0;
            while (j < h_) {
                if (row_tips[j].size() <= lo) {
                    ++j;
                    continue;
                }
                // Maximal run of rows that have tips in this pass.
                Scan sc;
                sc.start = band_start(w) + j * vs_;
                while (j < h_ && row_tips[j].size() > lo) {
                    const auto& t = row_tips[j];
                    std::vector<uint32_t> part(t.begin() + lo,
                                               t.begin() + std::min(t.size(), lo + napt));
                    for (uint32_t r = 0; r < vs_; ++r) sc.per_row_tips.push_back(part);
                    ++j;
                }
                sc.length = uint32_t(sc.per_row_tips.size());
                sc.reverse = reverse;
                runs.push_back(std::move(sc));
            }
            // A downward pass visits its runs from the top of the band.
            if (reverse) std::reverse(runs.begin(), runs.end());
            for (auto& sc : runs) plan.scans.push_back(std::move(sc));
            reverse = !reverse;
        }
    }
    return plan;
}

CostInput RelLayoutRP::k_values(const RangeQuery& q) const {
    check_query(q, schema_);
    CostInput c;
    const double n_sel = std::ceil(q.selectivity * schema_.n);
    c.retrieval_data_bits =
        (double(schema_.n) + n_sel * (q.projected.size() - 1)) * schema_.attr_bits;
    c.k_parallel = p_.max_active_tips;
    c.k_random = double(q.projected.size());
    return c;
}

void RelLayoutRP::store(MediaImage& media, const ValueFn& value) const {
    for (uint32_t v = 1; v <= schema_.n; ++v)
        for (uint32_t w = 1; w <= schema_.k; ++w) {
            const RSAddr a = map(v, w);
            write_value(media, p_, a.r, a.s, vs_, value(v, w));
        }
}

}  // namespace mems
