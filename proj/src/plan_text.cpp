#include "mems/plan_text.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace mems {

namespace {

uint32_t to_u32(std::string_view v) {
    uint32_t out = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw std::invalid_argument("plan text: bad number '" + std::string(v) + "'");
    return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    size_t pos = 0;
    while (true) {
        auto next = s.find(sep, pos);
        out.push_back(s.substr(pos, next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

}  // namespace

std::string encode_tip_set(std::span<const uint32_t> tips) {
    if (tips.empty()) return "~";
    std::string out;
    size_t i = 0;
    while (i < tips.size()) {
        size_t j = i;
        while (j + 1 < tips.size() && tips[j + 1] == tips[j] + 1) ++j;
        if (!out.empty()) out += ',';
        out += std::to_string(tips[i]);
        if (j > i) out += '-' + std::to_string(tips[j]);
        i = j + 1;
    }
    return out;
}

std::vector<uint32_t> decode_tip_set(std::string_view text) {
    std::vector<uint32_t> out;
    if (text == "~") return out;
    for (auto part : split(text, ',')) {
        auto dash = part.find('-');
        if (dash == std::string_view::npos) {
            out.push_back(to_u32(part));
            continue;
        }
        const uint32_t lo = to_u32(part.substr(0, dash));
        const uint32_t hi = to_u32(part.substr(dash + 1));
        if (hi < lo) throw std::invalid_argument("plan text: descending range");
        for (uint32_t t = lo; t <= hi; ++t) out.push_back(t);
    }
    return out;
}

std::string to_text(const AccessPlan& plan) {
    std::string out;
    for (const Scan& sc : plan.scans) {
        const bool per_row = !sc.per_row_tips.empty();
        out += per_row ? 'P' : 'S';
        out += ' ' + std::to_string(sc.start) + ' ' + std::to_string(sc.length) + ' ';
        out += sc.reverse ? '-' : '+';
        out += ' ';
        if (per_row) {
            for (size_t i = 0; i < sc.per_row_tips.size(); ++i) {
                if (i) out += ';';
                out += encode_tip_set(sc.per_row_tips[i]);
            }
        } else {
            out += encode_tip_set(sc.tips);
        }
        out += '\n';
    }
    return out;
}

AccessPlan parse_plan_text(std::string_view text) {
    AccessPlan plan;
    std::istringstream in{std::string(text)};
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string kind, start, length, dir, tips;
        if (!(ls >> kind)) continue;
        if (!(ls >> start >> length >> dir >> tips) || (kind != "S" && kind != "P") ||
            (dir != "+" && dir != "-"))
            throw std::invalid_argument("plan text line " + std::to_string(line_no) +
                                        ": malformed scan");
        Scan sc;
        sc.start = to_u32(start);
        sc.length = to_u32(length);
        sc.reverse = dir == "-";
        if (kind == "S") {
            sc.tips = decode_tip_set(tips);
        } else {
            for (auto row : split(tips, ';')) sc.per_row_tips.push_back(decode_tip_set(row));
            if (sc.per_row_tips.size() != sc.length)
                throw std::invalid_argument("plan text line " + std::to_string(line_no) +
                                            ": row count does not match length");
        }
        plan.scans.push_back(std::move(sc));
    }
    return plan;
}

}  // namespace mems
