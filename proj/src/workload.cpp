#include "mems/workload.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mems {

uint64_t uniform_below(std::mt19937_64& rng, uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: empty range");
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do x = rng();
    while (x >= limit);
    return x % n;
}

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint32_t tuples_for_size(uint64_t bytes, uint32_t k, uint32_t attr_bytes) {
    if (k == 0 || attr_bytes == 0) throw std::invalid_argument("empty tuple");
    const uint64_t n = bytes / (uint64_t(k) * attr_bytes);
    if (n == 0 || n > UINT32_MAX) throw std::invalid_argument("relation size gives no tuples");
    return uint32_t(n);
}

std::string_view to_string(Qualifying q) { return q == Qualifying::uniform ? "uniform" : "clustered"; }

Qualifying parse_qualifying(std::string_view s) {
    if (s == "uniform") return Qualifying::uniform;
    if (s == "clustered") return Qualifying::clustered;
    throw std::invalid_argument("unknown qualifying mode: " + std::string(s));
}

uint32_t qualifying_count(double selectivity, uint32_t n) {
    if (!(selectivity >= 0 && selectivity <= 1))
        throw std::invalid_argument("selectivity must be in [0, 1]");
    const double c = std::ceil(selectivity * n - 1e-9 * std::max(1.0, selectivity * n));
    return uint32_t(std::clamp(c, 0.0, double(n)));
}

std::vector<uint32_t> gen_qualifying(uint32_t n, double selectivity, Qualifying mode,
                                     uint64_t seed) {
    const uint32_t need = qualifying_count(selectivity, n);
    std::vector<uint32_t> out;
    out.reserve(need);
    if (mode == Qualifying::clustered) {
        for (uint32_t v = 1; v <= need; ++v) out.push_back(v);
        return out;
    }
    // Selection sampling: each id is kept with probability left / remaining.
    std::mt19937_64 rng(seed);
    uint32_t left = need;
    for (uint32_t v = 1; v <= n && left > 0; ++v) {
        if (uniform_below(rng, n - v + 1) < left) {
            out.push_back(v);
            --left;
        }
    }
    return out;
}

uint64_t Relation::value(uint32_t v, uint32_t w) const {
    if (v == 0 || v > schema.n || w == 0 || w > schema.k)
        throw std::out_of_range("attribute value index out of range");
    const uint64_t h = mix64(seed ^ mix64((uint64_t(v) << 16) | w));
    if (w != predicate_attr) return h;
    // Predicate values straddle the bound by qualification.
    return is_qualifying[v - 1] ? bound + 1 + h % (UINT64_MAX - bound) : h % (bound + 1);
}

std::vector<std::byte> Relation::bytes(uint32_t v, uint32_t w) const {
    std::vector<std::byte> out(schema.attr_bits / 8);
    uint64_t x = value(v, w);
    for (size_t i = 0; i < out.size(); ++i) {
        if (i && i % 8 == 0) x = mix64(x);  // pad wider attributes deterministically
        out[i] = std::byte(x >> (8 * (i % 8)));
    }
    return out;
}

Relation gen_relation(uint32_t n, uint32_t k, uint32_t attr_bytes, uint64_t seed,
                      double selectivity, Qualifying mode, const DeviceParams& p) {
    Relation rel;
    rel.schema = {k, attr_bytes * 8, n};
    RelLayoutRP capacity_check(rel.schema, p);
    (void)capacity_check;
    rel.seed = seed;
    rel.qualifying = gen_qualifying(n, selectivity, mode, mix64(seed + 1));
    rel.is_qualifying.assign(n, false);
    for (uint32_t v : rel.qualifying) rel.is_qualifying[v - 1] = true;
    return rel;
}

std::vector<std::byte> SpatialData::object(uint32_t x, uint32_t y) const {
    if (x == 0 || x > space.W || y == 0 || y > space.H) throw std::out_of_range("object out of space");
    std::vector<std::byte> out(space.obj_bits / 8);
    uint64_t h = mix64(seed ^ mix64((uint64_t(x) << 32) | y));
    for (size_t i = 0; i < out.size(); ++i) {
        if (i && i % 8 == 0) h = mix64(h);
        out[i] = std::byte(h >> (8 * (i % 8)));
    }
    return out;
}

SpatialData gen_spatial(uint64_t count, uint32_t obj_bytes, uint64_t seed, const DeviceParams& p) {
    const auto side = uint64_t(std::llround(std::sqrt(double(count))));
    if (count == 0 || side * side != count || side > UINT32_MAX)
        throw std::invalid_argument("object count must be a positive perfect square");
    SpatialData d;
    d.space = {uint32_t(side), uint32_t(side), obj_bytes * 8};
    SpatialLayoutSSY capacity_check(d.space, p);
    (void)capacity_check;
    d.seed = seed;
    return d;
}

QueryRegion query_shape(const SpatialSpace& s, double size_fraction, double aspect) {
    if (!(size_fraction > 0 && size_fraction <= 1) || !(aspect > 0))
        throw std::invalid_argument("query size must be in (0, 1] and aspect positive");
    const double area = size_fraction * double(s.W) * double(s.H);
    const double qx = std::round(std::sqrt(area * aspect));
    const double qy = qx > 0 ? std::round(area / qx) : 0;
    if (qx < 1 || qy < 1 || qx > s.W || qy > s.H)
        throw std::invalid_argument("query shape does not fit the space");
    return {1, 1, uint32_t(qx), uint32_t(qy)};
}

QueryRegion gen_query_region(const SpatialSpace& s, double size_fraction, double aspect,
                             std::mt19937_64& rng) {
    QueryRegion q = query_shape(s, size_fraction, aspect);
    q.x0 = uint32_t(uniform_below(rng, s.W - q.qx + 1)) + 1;
    q.y0 = uint32_t(uniform_below(rng, s.H - q.qy + 1)) + 1;
    return q;
}

}  // namespace mems
