#include "mems/emulator.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace mems {

SectorPos sector_position(uint32_t s, const DeviceParams& p) {
    const uint32_t col = (s - 1) / p.sectors_y + 1;
    const uint32_t idx = (s - 1) % p.sectors_y;
    return {col, (col % 2 == 1) ? idx + 1 : p.sectors_y - idx};
}

YDir transfer_direction(uint32_t col, bool reverse) {
    const bool up = (col % 2 == 1) != reverse;
    return up ? YDir::up : YDir::down;
}

void validate(const AccessPlan& plan, const DeviceParams& p) {
    auto check_set = [&](std::span<const uint32_t> tips, size_t scan_no) {
        if (tips.size() > p.max_active_tips)
            throw std::invalid_argument("scan " + std::to_string(scan_no) +
                                        ": more than N_APT active tips");
        uint32_t prev = 0;
        for (uint32_t t : tips) {
            if (t == 0 || t > p.num_tips() || t <= prev)
                throw std::invalid_argument("scan " + std::to_string(scan_no) +
                                            ": tips must be sorted, unique, in [1, N_PT]");
            prev = t;
        }
    };
    for (size_t i = 0; i < plan.scans.size(); ++i) {
        const Scan& sc = plan.scans[i];
        if (sc.length == 0 || sc.start == 0 ||
            uint64_t(sc.start) + sc.length - 1 > p.sectors_per_region())
            throw std::invalid_argument("scan " + std::to_string(i) + ": rows out of [1, N_S]");
        check_set(sc.tips, i);
        if (!sc.per_row_tips.empty()) {
            if (sc.per_row_tips.size() != sc.length)
                throw std::invalid_argument("scan " + std::to_string(i) +
                                            ": per_row_tips size must equal length");
            for (const auto& row : sc.per_row_tips) check_set(row, i);
        }
    }
}

Timing& Timing::operator+=(const Timing& o) {
    total_s += o.total_s;
    seek_s += o.seek_s;
    transfer_s += o.transfer_s;
    settle_s += o.settle_s;
    turnaround_s += o.turnaround_s;
    n_seeks += o.n_seeks;
    n_row_steps += o.n_row_steps;
    sectors += o.sectors;
    reposition_s += o.reposition_s;
    n_repositions += o.n_repositions;
    return *this;
}

namespace {

// Mean |i - j| for i, j uniform on [1, n].
double mean_distance(uint32_t n) { return (double(n) * n - 1.0) / (3.0 * n); }

}  // namespace

SeekCost seek_cost(const SledState& from, SectorPos to, YDir dir, const DeviceParams& p) {
    if (to.col == 0 || to.col > p.sectors_x || to.row == 0 || to.row > p.sectors_y)
        throw std::out_of_range("seek target outside the region");

    SeekCost c;
    if (!from.positioned) {
        const double x = p.move_x_s + p.settle_s;
        const double y = p.move_y_s + p.turnaround_s;
        if (x >= y) {
            c.move_s = p.move_x_s;
            c.settle_s = p.settle_s;
        } else {
            c.move_s = p.move_y_s;
            c.turnaround_s = p.turnaround_s;
        }
        c.kind = SeekCost::Kind::reposition;
        return c;
    }

    const uint32_t dcol = to.col > from.col ? to.col - from.col : from.col - to.col;
    const uint32_t drow = to.row > from.row ? to.row - from.row : from.row - to.row;
    const bool reversal = from.y_dir != YDir::none && dir != YDir::none && dir != from.y_dir;
    const bool adjacent = dcol == 1 && drow == 0;

    double move_x = 0, move_y = 0;
    if (p.seek_model == SeekModel::average) {
        move_x = dcol ? p.move_x_s : 0.0;
        move_y = drow ? p.move_y_s : 0.0;
    } else {
        if (dcol) move_x = p.move_x_s * dcol / mean_distance(p.sectors_x);
        if (drow) move_y = p.move_y_s * drow / mean_distance(p.sectors_y);
    }
    if (adjacent) move_x = 0;  // adjacent-column move is negligible next to the settle

    const double seek_x = dcol ? move_x + p.settle_s : 0.0;
    const double seek_y = move_y + (reversal ? p.turnaround_s : 0.0);
    if (seek_x == 0 && seek_y == 0 && dcol == 0) {
        c.kind = SeekCost::Kind::none;
        return c;
    }
    if (dcol && seek_x >= seek_y) {
        c.move_s = move_x;
        c.settle_s = p.settle_s;
    } else {
        c.move_s = move_y;
        c.turnaround_s = reversal ? p.turnaround_s : 0.0;
    }
    if ((dcol && !adjacent) || drow)
        c.kind = SeekCost::Kind::reposition;
    else if (adjacent)
        c.kind = SeekCost::Kind::adjacent_column;
    else
        c.kind = reversal ? SeekCost::Kind::turnaround : SeekCost::Kind::none;
    return c;
}

MediaImage::MediaImage(const DeviceParams& p) : params_(p), sector_bytes_(p.sector_bits / 8) {
    p.validate();
    if (p.sector_bits % 8 != 0)
        throw std::invalid_argument("media image needs a whole number of bytes per sector");
    bytes_.assign(size_t(p.num_regions()) * p.sectors_per_region() * sector_bytes_, std::byte{0});
}

size_t MediaImage::offset(const PhysAddr& a) const {
    const auto& p = params_;
    if (a.r_x == 0 || a.r_x > p.regions_x || a.r_y == 0 || a.r_y > p.regions_y || a.s_x == 0 ||
        a.s_x > p.sectors_x || a.s_y == 0 || a.s_y > p.sectors_y)
        throw std::out_of_range("physical address outside the device");
    const size_t region = size_t(a.r_y - 1) * p.regions_x + (a.r_x - 1);
    const size_t sector = size_t(a.s_x - 1) * p.sectors_y + (a.s_y - 1);
    return (region * p.sectors_per_region() + sector) * sector_bytes_;
}

void MediaImage::write(const PhysAddr& a, std::span<const std::byte> data) {
    if (data.size() > sector_bytes_) throw std::invalid_argument("write larger than a tip sector");
    std::copy(data.begin(), data.end(), bytes_.begin() + offset(a));
}

std::span<const std::byte> MediaImage::sector(const PhysAddr& a) const {
    return {bytes_.data() + offset(a), sector_bytes_};
}

Emulator::Emulator(DeviceParams p) : params_(p), sector_time_s_(derive(p).sector_time_s) {}

template <class OnRow>
Timing Emulator::run(const AccessPlan& plan, OnRow&& on_row) {
    validate(plan, params_);
    Timing t;
    for (const Scan& sc : plan.scans) {
        const uint32_t first = sc.reverse ? sc.last() : sc.start;
        SectorPos pos = sector_position(first, params_);
        YDir dir = transfer_direction(pos.col, sc.reverse);

        const SeekCost c = seek_cost(state_, pos, dir, params_);
        t.seek_s += c.move_s;
        t.settle_s += c.settle_s;
        t.turnaround_s += c.turnaround_s;
        t.n_seeks += 1;
        if (c.kind == SeekCost::Kind::reposition) {
            t.reposition_s += c.total();
            t.n_repositions += 1;
        }

        for (uint32_t i = 0; i < sc.length; ++i) {
            const uint32_t off = sc.reverse ? sc.length - 1 - i : i;
            const uint32_t s = sc.start + off;
            if (i > 0) {
                const SectorPos next = sector_position(s, params_);
                if (next.col != pos.col) {
                    // Column-prime crossing into the adjacent column.
                    t.settle_s += params_.settle_s;
                    dir = transfer_direction(next.col, sc.reverse);
                }
                pos = next;
            }
            const auto tips = sc.row_tips(off);
            t.transfer_s += sector_time_s_;
            t.n_row_steps += 1;
            t.sectors += tips.size();
            on_row(pos, tips);
        }
        state_ = SledState{pos.col, pos.row, dir, true};
    }
    t.total_s = t.seek_s + t.transfer_s + t.settle_s + t.turnaround_s;
    return t;
}

Timing Emulator::execute(const AccessPlan& plan) {
    return run(plan, [](SectorPos, std::span<const uint32_t>) {});
}

std::pair<Timing, std::vector<std::byte>> Emulator::read(const AccessPlan& plan,
                                                         const MediaImage& media) {
    if (!(media.params().regions_x == params_.regions_x &&
          media.params().regions_y == params_.regions_y &&
          media.params().sectors_x == params_.sectors_x &&
          media.params().sectors_y == params_.sectors_y &&
          media.params().sector_bits == params_.sector_bits))
        throw std::invalid_argument("media image geometry does not match the device");
    std::vector<std::byte> out;
    const uint32_t rx = params_.regions_x;
    Timing t = run(plan, [&](SectorPos pos, std::span<const uint32_t> tips) {
        for (uint32_t r : tips) {
            const PhysAddr a{(r - 1) % rx + 1, (r - 1) / rx + 1, pos.col, pos.row};
            auto sec = media.sector(a);
            out.insert(out.end(), sec.begin(), sec.end());
        }
    });
    return {t, std::move(out)};
}

}  // namespace mems
