#include "mems/space_filling.hpp"

#include <stdexcept>
#include <string>

namespace mems {

std::string_view to_string(Curve c) { return c == Curve::hilbert ? "hilbert" : "zorder"; }

Curve parse_curve(std::string_view s) {
    if (s == "hilbert") return Curve::hilbert;
    if (s == "zorder") return Curve::zorder;
    throw std::invalid_argument("unknown curve: " + std::string(s));
}

namespace {

bool is_pow2(uint32_t n) { return n && !(n & (n - 1)); }

void rotate(uint32_t n, uint32_t& x, uint32_t& y, uint32_t rx, uint32_t ry) {
    if (ry == 0) {
        if (rx == 1) {
            x = n - 1 - x;
            y = n - 1 - y;
        }
        std::swap(x, y);
    }
}

}  // namespace

std::pair<uint32_t, uint32_t> hilbert_d2xy(uint32_t n, uint64_t d) {
    if (!is_pow2(n)) throw std::invalid_argument("Hilbert grid side must be a power of two");
    if (d >= uint64_t(n) * n) throw std::out_of_range("Hilbert distance out of range");
    uint32_t x = 0, y = 0;
    uint64_t t = d;
    for (uint32_t s = 1; s < n; s *= 2) {
        const uint32_t rx = 1 & uint32_t(t / 2);
        const uint32_t ry = 1 & uint32_t(t ^ rx);
        rotate(s, x, y, rx, ry);
        x += s * rx;
        y += s * ry;
        t /= 4;
    }
    return {x, y};
}

uint64_t hilbert_xy2d(uint32_t n, uint32_t x, uint32_t y) {
    if (!is_pow2(n)) throw std::invalid_argument("Hilbert grid side must be a power of two");
    if (x >= n || y >= n) throw std::out_of_range("Hilbert cell out of range");
    uint64_t d = 0;
    for (uint32_t s = n / 2; s > 0; s /= 2) {
        const uint32_t rx = (x & s) > 0;
        const uint32_t ry = (y & s) > 0;
        d += uint64_t(s) * s * ((3 * rx) ^ ry);
        rotate(n, x, y, rx, ry);
    }
    return d;
}

std::pair<uint32_t, uint32_t> zorder_d2xy(uint64_t d) {
    uint32_t x = 0, y = 0;
    for (int b = 0; b < 32; ++b) {
        x |= uint32_t((d >> (2 * b)) & 1) << b;
        y |= uint32_t((d >> (2 * b + 1)) & 1) << b;
    }
    return {x, y};
}

uint64_t zorder_xy2d(uint32_t x, uint32_t y) {
    uint64_t d = 0;
    for (int b = 0; b < 32; ++b) {
        d |= uint64_t((x >> b) & 1) << (2 * b);
        d |= uint64_t((y >> b) & 1) << (2 * b + 1);
    }
    return d;
}

std::vector<std::pair<uint32_t, uint32_t>> curve_order(Curve c, uint32_t gx, uint32_t gy) {
    if (gx == 0 || gy == 0) throw std::invalid_argument("empty grid");
    uint32_t n = 1;
    while (n < gx || n < gy) n *= 2;
    std::vector<std::pair<uint32_t, uint32_t>> out;
    out.reserve(size_t(gx) * gy);
    for (uint64_t d = 0; d < uint64_t(n) * n && out.size() < size_t(gx) * gy; ++d) {
        auto [x, y] = c == Curve::hilbert ? hilbert_d2xy(n, d) : zorder_d2xy(d);
        if (x < gx && y < gy) out.emplace_back(x + 1, y + 1);
    }
    return out;
}

}  // namespace mems
