#pragma once

/// @file plan_text.hpp
/// @brief Line-oriented text form of an AccessPlan, for debugging and golden tests.
///
/// One scan per line:
///
///     S <start> <length> <+|-> <tips>
///     P <start> <length> <+|-> <row-1 tips>;<row-2 tips>;...
///
/// `S` is a scan with one activation set, `P` a scan with per-row sets listed
/// in ascending row order. `+` walks rows upward, `-` downward. A tip set is a
/// comma-separated list of single indices and inclusive ranges (`1-1280,1300`);
/// `~` is the empty set. Blank lines and `#` comments are ignored.

#include "mems/emulator.hpp"

#include <string>
#include <string_view>

namespace mems {

std::string encode_tip_set(std::span<const uint32_t> tips);
std::vector<uint32_t> decode_tip_set(std::string_view text);

std::string to_text(const AccessPlan& plan);
AccessPlan parse_plan_text(std::string_view text);

}  // namespace mems
