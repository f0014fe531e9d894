#pragma once

/// @file space_filling.hpp
/// @brief Hilbert and Z-order curves on power-of-two grids, and curve
/// orderings of arbitrary rectangular grids.

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace mems {

enum class Curve { hilbert, zorder };

std::string_view to_string(Curve c);
Curve parse_curve(std::string_view s);

/// Cell (x, y), 0-based, at distance d along the Hilbert curve of an n x n
/// grid; n must be a power of two.
std::pair<uint32_t, uint32_t> hilbert_d2xy(uint32_t n, uint64_t d);
uint64_t hilbert_xy2d(uint32_t n, uint32_t x, uint32_t y);

/// Morton order, x in the low bit of each pair.
std::pair<uint32_t, uint32_t> zorder_d2xy(uint64_t d);
uint64_t zorder_xy2d(uint32_t x, uint32_t y);

/// All cells of a gx x gy grid (1-based) in curve order. The curve runs on
/// the smallest enclosing power-of-two square; cells outside the grid are
/// skipped.
std::vector<std::pair<uint32_t, uint32_t>> curve_order(Curve c, uint32_t gx, uint32_t gy);

}  // namespace mems
