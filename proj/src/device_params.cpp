#include "mems/device_params.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mems {

namespace {

// Decimal text times 10^exp10, rounded once: the exponent is shifted in the
// text so "0.52" ms gives exactly the double nearest 0.52e-3.
bool scaled_from_chars(std::string_view text, int exp10, double& out) {
    std::string t(text);
    int e = exp10;
    if (auto pos = t.find_first_of("eE"); pos != std::string::npos) {
        int given = 0;
        auto res = std::from_chars(t.data() + pos + 1 + (t[pos + 1] == '+'), t.data() + t.size(), given);
        if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) return false;
        e += given;
        t.resize(pos);
    }
    t += 'e' + std::to_string(e);
    auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    return res.ec == std::errc{} && res.ptr == t.data() + t.size();
}

// Shortest text t with scaled_from_chars(t, exp10) == v.
std::string format_scaled(double v, int exp10) {
    const double shown = v / std::pow(10.0, exp10);
    for (int prec = 1; prec <= 17; ++prec) {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof(buf), shown, std::chars_format::general, prec);
        double back = 0;
        if (scaled_from_chars(std::string_view(buf, res.ptr - buf), exp10, back) && back == v)
            return std::string(buf, res.ptr);
    }
    // Shortest scientific form of v itself, exponent shifted by -exp10.
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific);
    std::string t(buf, res.ptr);
    const auto e = t.find('e');
    return t.substr(0, e + 1) + std::to_string(std::stoi(t.substr(e + 1)) - exp10);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view key, std::string_view v, int exp10) {
    double out = 0;
    if (v.empty() || !scaled_from_chars(v, exp10, out))
        throw std::invalid_argument("config: bad number for " + std::string(key) + ": '" +
                                    std::string(v) + "'");
    return out;
}

uint32_t parse_count(std::string_view key, std::string_view v) {
    uint64_t out = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || out > UINT32_MAX)
        throw std::invalid_argument("config: bad count for " + std::string(key) + ": '" +
                                    std::string(v) + "'");
    return static_cast<uint32_t>(out);
}

}  // namespace

std::string_view to_string(SeekModel m) {
    return m == SeekModel::average ? "average" : "distance";
}

SeekModel parse_seek_model(std::string_view s) {
    if (s == "average") return SeekModel::average;
    if (s == "distance") return SeekModel::distance;
    throw std::invalid_argument("unknown seek model: " + std::string(s));
}

void DeviceParams::validate() const {
    if (regions_x == 0 || regions_y == 0 || sectors_x == 0 || sectors_y == 0)
        throw std::invalid_argument("device geometry counts must be positive");
    if (max_active_tips == 0 || max_active_tips > num_tips())
        throw std::invalid_argument("N_APT must be in [1, N_PT]");
    if (sector_bits == 0) throw std::invalid_argument("SectorSize must be positive");
    if (!(tip_rate_bps > 0)) throw std::invalid_argument("TransferRate must be positive");
    // Mechanical delays may be zero (idealized devices), never negative.
    if (!(move_x_s >= 0) || !(move_y_s >= 0) || !(settle_s >= 0) || !(turnaround_s >= 0))
        throw std::invalid_argument("device timing fields must not be negative");
    if (!std::isfinite(tip_rate_bps) || !std::isfinite(move_x_s) || !std::isfinite(move_y_s) ||
        !std::isfinite(settle_s) || !std::isfinite(turnaround_s))
        throw std::invalid_argument("device timing fields must be finite");
}

DeviceParams cmu_defaults() { return DeviceParams{}; }

DerivedParams derive(const DeviceParams& p) {
    p.validate();
    DerivedParams d;
    d.region_bits = double(p.sectors_x) * double(p.sectors_y) * double(p.sector_bits);
    d.sector_time_s = double(p.sector_bits) / p.tip_rate_bps;
    // Column-prime read: every column's sectors plus one adjacent-column seek
    // (settle) per column.
    d.region_read_time_s = d.region_bits / p.tip_rate_bps + double(p.sectors_x) * p.settle_s;
    return d;
}

std::string to_config_text(const DeviceParams& p) {
    std::ostringstream os;
    os << "R_x = " << p.regions_x << '\n'
       << "R_y = " << p.regions_y << '\n'
       << "S_x = " << p.sectors_x << '\n'
       << "S_y = " << p.sectors_y << '\n'
       << "N_APT = " << p.max_active_tips << '\n'
       << "SectorSize = " << p.sector_bits << '\n'
       << "TransferRate = " << format_scaled(p.tip_rate_bps, 6) << '\n'
       << "T_X = " << format_scaled(p.move_x_s, -3) << '\n'
       << "T_Y = " << format_scaled(p.move_y_s, -3) << '\n'
       << "T_S = " << format_scaled(p.settle_s, -3) << '\n'
       << "T_T = " << format_scaled(p.turnaround_s, -3) << '\n'
       << "seek_model = " << to_string(p.seek_model) << '\n';
    return os.str();
}

DeviceParams parse_config_text(std::string_view text) {
    return parse_config_text(text, cmu_defaults());
}

DeviceParams parse_config_text(std::string_view text, DeviceParams p) {
    long long n_r = -1, n_s = -1, n_pt = -1;
    size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        auto key = trim(line.substr(0, eq));
        auto val = trim(line.substr(eq + 1));
        if (key == "R_x") p.regions_x = parse_count(key, val);
        else if (key == "R_y") p.regions_y = parse_count(key, val);
        else if (key == "S_x") p.sectors_x = parse_count(key, val);
        else if (key == "S_y") p.sectors_y = parse_count(key, val);
        else if (key == "N_APT") p.max_active_tips = parse_count(key, val);
        else if (key == "SectorSize") p.sector_bits = parse_count(key, val);
        else if (key == "TransferRate") p.tip_rate_bps = parse_number(key, val, 6);
        else if (key == "T_X") p.move_x_s = parse_number(key, val, -3);
        else if (key == "T_Y") p.move_y_s = parse_number(key, val, -3);
        else if (key == "T_S") p.settle_s = parse_number(key, val, -3);
        else if (key == "T_T") p.turnaround_s = parse_number(key, val, -3);
        else if (key == "N_R") n_r = parse_count(key, val);
        else if (key == "N_S") n_s = parse_count(key, val);
        else if (key == "N_PT") n_pt = parse_count(key, val);
        else if (key == "seek_model") p.seek_model = parse_seek_model(val);
        else
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": unknown key '" + std::string(key) + "'");
    }
    if (n_r >= 0 && n_r != p.num_regions())
        throw std::invalid_argument("config: N_R disagrees with R_x * R_y");
    if (n_pt >= 0 && n_pt != p.num_tips())
        throw std::invalid_argument("config: N_PT must equal N_R");
    if (n_s >= 0 && n_s != p.sectors_per_region())
        throw std::invalid_argument("config: N_S disagrees with S_x * S_y");
    p.validate();
    return p;
}

DeviceParams load_config(const std::filesystem::path& path) {
    return load_config(path, cmu_defaults());
}

DeviceParams load_config(const std::filesystem::path& path, DeviceParams base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open device config: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), base);
}

}  // namespace mems
