#include "mems/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mems {

namespace {

uint32_t ceil_div(uint64_t a, uint64_t b) { return uint32_t((a + b - 1) / b); }
bool is_pow2(uint32_t n) { return n && !(n & (n - 1)); }

void check_space(const SpatialSpace& s) {
    if (s.W == 0 || s.H == 0) throw std::invalid_argument("space must be non-empty");
}

void write_object(MediaImage& media, const DeviceParams& p, RSAddr a, uint32_t vs,
                  std::span<const std::byte> bytes) {
    const size_t sb = p.sector_bits / 8;
    if (bytes.size() != sb * vs) throw std::invalid_argument("object size does not match obj_bits");
    for (uint32_t j = 0; j < vs; ++j)
        media.write(rs_to_mems({a.r, a.s + j}, p), bytes.subspan(j * sb, sb));
}

}  // namespace

uint32_t sectors_per_object(const SpatialSpace& s, const DeviceParams& p) {
    if (s.obj_bits == 0 || s.obj_bits % p.sector_bits != 0)
        throw std::invalid_argument("obj_bits must be a positive multiple of the sector size");
    return s.obj_bits / p.sector_bits;
}

QueryRegion clip(const QueryRegion& q, const SpatialSpace& s) {
    QueryRegion out{1, 1, 0, 0};
    if (q.qx == 0 || q.qy == 0 || q.x0 == 0 || q.y0 == 0 || q.x0 > s.W || q.y0 > s.H) return out;
    out.x0 = q.x0;
    out.y0 = q.y0;
    out.qx = std::min<uint64_t>(q.x1(), s.W) - q.x0 + 1;
    out.qy = std::min<uint64_t>(q.y1(), s.H) - q.y0 + 1;
    return out;
}

double WorkloadProfile::weighted_aspect() const {
    if (entries.empty()) throw std::invalid_argument("workload profile is empty");
    double sx = 0, sy = 0;
    for (const auto& e : entries) {
        if (!(e.f > 0) || e.qx == 0 || e.qy == 0)
            throw std::invalid_argument("profile entries need f > 0 and non-empty extents");
        sx += e.f * e.qx;
        sy += e.f * e.qy;
    }
    return sx / sy;
}

WorkloadProfile parse_profile(std::string_view text) {
    WorkloadProfile prof;
    std::istringstream in{std::string(text)};
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        WorkloadProfile::Entry e;
        if (!(ls >> e.f)) continue;
        std::string extra;
        if (!(ls >> e.qx >> e.qy) || (ls >> extra) || !(e.f > 0) || e.qx == 0 || e.qy == 0)
            throw std::invalid_argument("profile line " + std::to_string(line_no) +
                                        ": expected 'f qx qy' with f > 0");
        prof.entries.push_back(e);
    }
    if (prof.entries.empty()) throw std::invalid_argument("workload profile is empty");
    return prof;
}

std::vector<std::pair<uint32_t, uint32_t>> block_shapes(uint32_t n) {
    std::vector<std::pair<uint32_t, uint32_t>> out;
    for (uint32_t by = 1; by <= n; ++by) {
        if (n % by) continue;
        const uint32_t bx = n / by;
        const bool ok = bx >= by ? (bx % by == 0 && is_pow2(bx / by))
                                 : (by % bx == 0 && is_pow2(by / bx));
        if (ok) out.emplace_back(bx, by);
    }
    return out;
}

BlockGrid build_block_grid(const SpatialSpace& s, double ratio, const DeviceParams& p, Curve c) {
    check_space(s);
    if (!(ratio > 0) || !std::isfinite(ratio))
        throw std::invalid_argument("block aspect ratio must be positive");
    const auto shapes = block_shapes(p.num_regions());
    if (shapes.empty()) throw std::invalid_argument("N_R has no power-of-two block shape");
    // Widest first, so strict < keeps the wider shape on ties.
    const double target = std::log2(ratio);
    auto best = shapes.front();
    double best_d = HUGE_VAL;
    for (auto sh : shapes) {
        const double d = std::abs(std::log2(double(sh.first) / sh.second) - target);
        if (d < best_d - 1e-12) {
            best_d = d;
            best = sh;
        }
    }
    BlockGrid g;
    g.bx = best.first;
    g.by = best.second;
    g.gx = ceil_div(s.W, g.bx);
    g.gy = ceil_div(s.H, g.by);
    g.curve = c;
    if (uint64_t(g.gx) * g.gy * sectors_per_object(s, p) > p.sectors_per_region())
        throw std::invalid_argument("space exceeds device capacity");
    g.order = curve_order(c, g.gx, g.gy);
    g.position.assign(size_t(g.gx) * g.gy, 0);
    for (size_t i = 0; i < g.order.size(); ++i) {
        auto [bi, bj] = g.order[i];
        g.position[(bj - 1) * g.gx + (bi - 1)] = uint32_t(i + 1);
    }
    return g;
}

BlockGrid build_block_grid(const SpatialSpace& s, const WorkloadProfile& profile,
                           const DeviceParams& p, Curve c) {
    return build_block_grid(s, profile.weighted_aspect(), p, c);
}

// ---- sequential layout -------------------------------------------------------

SpatialLayoutSSY::SpatialLayoutSSY(SpatialSpace s, DeviceParams p) : s_(s), p_(p) {
    check_space(s_);
    p_.validate();
    vs_ = sectors_per_object(s_, p_);
    const uint32_t strips = ceil_div(s_.W, p_.num_tips());
    if (uint64_t(strips) * s_.H * vs_ > p_.sectors_per_region())
        throw std::invalid_argument("space exceeds device capacity");
}

RSAddr SpatialLayoutSSY::map(uint32_t x, uint32_t y) const {
    if (x == 0 || x > s_.W || y == 0 || y > s_.H) throw std::out_of_range("object out of space");
    const uint32_t npt = p_.num_tips();
    const uint32_t strip = (x - 1) / npt;
    return {(x - 1) % npt + 1, (strip * s_.H + (y - 1)) * vs_ + 1};
}

PhysAddr SpatialLayoutSSY::map_phys(uint32_t x, uint32_t y) const {
    if (x == 0 || x > s_.W || y == 0 || y > s_.H) throw std::out_of_range("object out of space");
    if (s_.W > p_.num_tips() || vs_ != 1)
        throw std::invalid_argument("direct formula covers one strip of one-sector objects");
    PhysAddr a;
    a.r_x = (x - 1) % p_.regions_x + 1;
    a.r_y = ceil_div(x, p_.regions_x);
    a.s_x = ceil_div(y, p_.sectors_y);
    a.s_y = (a.s_x % 2 == 1) ? (y - 1) % p_.sectors_y + 1 : p_.sectors_y - (y - 1) % p_.sectors_y;
    return a;
}

AccessPlan SpatialLayoutSSY::compile(const QueryRegion& q0) const {
    const QueryRegion q = clip(q0, s_);
    AccessPlan plan;
    if (q.qx == 0) return plan;
    const uint32_t npt = p_.num_tips();
    for (uint32_t strip = (q.x0 - 1) / npt; strip <= (q.x1() - 1) / npt; ++strip) {
        const uint32_t lo = std::max(q.x0, strip * npt + 1) - strip * npt;
        const uint32_t hi = std::min(q.x1(), (strip + 1) * npt) - strip * npt;
        for (uint32_t t0 = lo; t0 <= hi; t0 += p_.max_active_tips) {
            Scan sc;
            for (uint32_t t = t0; t <= hi && t < t0 + p_.max_active_tips; ++t) sc.tips.push_back(t);
            sc.start = (strip * s_.H + (q.y0 - 1)) * vs_ + 1;
            sc.length = q.qy * vs_;
            sc.reverse = plan.scans.size() % 2 == 1;
            plan.scans.push_back(std::move(sc));
        }
    }
    return plan;
}

CostInput SpatialLayoutSSY::k_values(const QueryRegion& q0) const {
    const QueryRegion q = clip(q0, s_);
    CostInput c;
    c.retrieval_data_bits = double(q.size()) * s_.obj_bits;
    c.k_parallel = q.qx ? std::min<double>(q.qx, p_.max_active_tips) : p_.max_active_tips;
    c.k_random = q.qx ? 1 : 0;
    return c;
}

void SpatialLayoutSSY::store(MediaImage& media, const ObjectFn& obj) const {
    for (uint32_t y = 1; y <= s_.H; ++y)
        for (uint32_t x = 1; x <= s_.W; ++x) write_object(media, p_, map(x, y), vs_, obj(x, y));
}

// ---- parallel layout ---------------------------------------------------------

SpatialLayoutSP::SpatialLayoutSP(SpatialSpace s, BlockGrid grid, DeviceParams p,
                                 bool whole_group_reads)
    : s_(s), grid_(std::move(grid)), p_(p), whole_(whole_group_reads) {
    check_space(s_);
    p_.validate();
    vs_ = sectors_per_object(s_, p_);
    if (uint64_t(grid_.bx) * grid_.by != p_.num_regions())
        throw std::invalid_argument("block must hold exactly N_R objects");
    if (uint64_t(grid_.gx) * grid_.bx < s_.W || uint64_t(grid_.gy) * grid_.by < s_.H ||
        grid_.order.size() != grid_.n_blocks() || grid_.position.size() != grid_.n_blocks())
        throw std::invalid_argument("block grid does not cover the space");
    if (uint64_t(grid_.n_blocks()) * vs_ > p_.sectors_per_region())
        throw std::invalid_argument("space exceeds device capacity");
}

RSAddr SpatialLayoutSP::map(uint32_t x, uint32_t y) const {
    if (x == 0 || x > s_.W || y == 0 || y > s_.H) throw std::out_of_range("object out of space");
    const uint32_t bi = (x - 1) / grid_.bx + 1, bj = (y - 1) / grid_.by + 1;
    const uint32_t xl = (x - 1) % grid_.bx + 1, yl = (y - 1) % grid_.by + 1;
    return {(yl - 1) * grid_.bx + xl, (grid_.position_of(bi, bj) - 1) * vs_ + 1};
}

std::vector<uint32_t> SpatialLayoutSP::query_blocks(const QueryRegion& q0) const {
    const QueryRegion q = clip(q0, s_);
    std::vector<uint32_t> out;
    if (q.qx == 0) return out;
    for (uint32_t bj = (q.y0 - 1) / grid_.by + 1; bj <= (q.y1() - 1) / grid_.by + 1; ++bj)
        for (uint32_t bi = (q.x0 - 1) / grid_.bx + 1; bi <= (q.x1() - 1) / grid_.bx + 1; ++bi)
            out.push_back(grid_.position_of(bi, bj));
    std::sort(out.begin(), out.end());
    return out;
}

AccessPlan SpatialLayoutSP::compile(const QueryRegion& q0) const {
    const QueryRegion q = clip(q0, s_);
    AccessPlan plan;
    if (q.qx == 0) return plan;
    const uint32_t napt = p_.max_active_tips;

    // Overlapping tips of every query block, in block-position order.
    const auto blocks = query_blocks(q);
    std::vector<std::vector<uint32_t>> tips(blocks.size());
    for (size_t b = 0; b < blocks.size(); ++b) {
        auto [bi, bj] = grid_.order[blocks[b] - 1];
        auto& t = tips[b];
        if (whole_) {
            t.resize(p_.num_regions());
            for (uint32_t r = 0; r < t.size(); ++r) t[r] = r + 1;
            continue;
        }
        const uint32_t bx0 = (bi - 1) * grid_.bx, by0 = (bj - 1) * grid_.by;
        const uint32_t xa = std::max(q.x0, bx0 + 1) - bx0, xb = std::min(q.x1(), bx0 + grid_.bx) - bx0;
        const uint32_t ya = std::max(q.y0, by0 + 1) - by0, yb = std::min(q.y1(), by0 + grid_.by) - by0;
        t.reserve(size_t(xb - xa + 1) * (yb - ya + 1));
        for (uint32_t yl = ya; yl <= yb; ++yl)
            for (uint32_t xl = xa; xl <= xb; ++xl) t.push_back((yl - 1) * grid_.bx + xl);
    }

    // Runs of consecutive positions share one seek per pass.
    size_t b = 0;
    while (b < blocks.size()) {
        size_t e = b + 1;
        while (e < blocks.size() && blocks[e] == blocks[e - 1] + 1) ++e;
        size_t passes = 0;
        for (size_t i = b; i < e; ++i) passes = std::max(passes, (tips[i].size() + napt - 1) / napt);
        bool reverse = false;
        for (size_t pass = 0; pass < passes; ++pass) {
            const size_t lo = pass * napt;
            std::vector<Scan> runs;
            size_t i = b;
            while (i < e) {
                if (tips[i].size() <= lo) {
                    ++i;
                    continue;
                }
                Scan sc;
                sc.start = (blocks[i] - 1) * vs_ + 1;
                while (i < e && tips[i].size() > lo) {
                    const auto& t = tips[i];
                    std::vector<uint32_t> part(t.begin() + lo, t.begin() + std::min(t.size(), lo + napt));
                    for (uint32_t r = 0; r < vs_; ++r) sc.per_row_tips.push_back(part);
                    ++i;
                }
                sc.length = uint32_t(sc.per_row_tips.size());
                sc.reverse = reverse;
                runs.push_back(std::move(sc));
            }
            if (reverse) std::reverse(runs.begin(), runs.end());
            for (auto& sc : runs) plan.scans.push_back(std::move(sc));
            reverse = !reverse;
        }
        b = e;
    }
    return plan;
}

CostInput SpatialLayoutSP::k_values(const QueryRegion& q0) const {
    const QueryRegion q = clip(q0, s_);
    CostInput c;
    c.retrieval_data_bits = double(q.size()) * s_.obj_bits;
    const auto blocks = query_blocks(q);
    for (size_t i = 0; i < blocks.size(); ++i)
        if (i == 0 || blocks[i] != blocks[i - 1] + 1) c.k_random += 1;
    const AccessPlan plan = compile(q);
    uint64_t sectors = 0, rows = 0;
    for (const auto& sc : plan.scans) {
        rows += sc.length;
        for (uint32_t o = 0; o < sc.length; ++o) sectors += sc.row_tips(o).size();
    }
    c.k_parallel = rows ? double(sectors) / double(rows) : p_.max_active_tips;
    return c;
}

void SpatialLayoutSP::store(MediaImage& media, const ObjectFn& obj) const {
    for (uint32_t y = 1; y <= s_.H; ++y)
        for (uint32_t x = 1; x <= s_.W; ++x) write_object(media, p_, map(x, y), vs_, obj(x, y));
}

}  // namespace mems
