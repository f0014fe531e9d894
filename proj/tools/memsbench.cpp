// memsbench: device info, address mapping and placement benchmarks.

#include "mems/bench.hpp"
#include "mems/plan_text.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

using namespace mems;

namespace {

struct DeviceOpts {
    std::string config;
    std::string seek_model;

    DeviceParams resolve() const {
        DeviceParams p = config.empty() ? cmu_defaults() : load_config(config);
        if (!seek_model.empty()) p.seek_model = parse_seek_model(seek_model);
        p.validate();
        return p;
    }
};

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& s : items)
        if (!s.empty()) out.push_back(s);
    return out;
}

// "0.01%" or "0.01" both mean 0.01 percent.
double parse_percent(std::string s) {
    if (!s.empty() && s.back() == '%') s.pop_back();
    return parse_ratio(s) / 100.0;
}

void emit(const std::string& path, const std::vector<BenchRow>& rows, bool spatial) {
    auto write = [&](std::ostream& os) {
        spatial ? write_spatial_csv(os, rows) : write_relational_csv(os, rows);
    };
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write(out);
}

void print_info(const DeviceParams& p) {
    const DerivedParams d = derive(p);
    const RSParams rs = rs_params(p);
    std::printf("%s", to_config_text(p).c_str());
    std::printf("N_R = %u\nN_S = %u\nN_PT = %u\n", p.num_regions(), p.sectors_per_region(),
                p.num_tips());
    std::printf("region_bits = %.9g\n", d.region_bits);
    std::printf("sector_time_us = %.9g\n", d.sector_time_s * 1e6);
    std::printf("region_read_time_s = %.9g\n", d.region_read_time_s);
    std::printf("transfer_rate_rs_mbps = %.9g\n", rs.transfer_rate_rs / 1e6);
    std::printf("seek_time_rs_ms = %.9g\n", rs.seek_time_rs * 1e3);
    std::printf("seek_time_adj_ms = %.9g\n", seek_time_adj(p) * 1e3);
    const double settle_total = p.sectors_x * seek_time_adj(p);
    std::printf("region_settle_overhead = %.9g  # settle time / transfer time of one region\n",
                settle_total / (d.region_bits / p.tip_rate_bps));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MEMS storage placement emulator and benchmark"};
    app.require_subcommand(1);
    DeviceOpts dev;
    app.add_option("--device-config", dev.config, "device parameter file (key = value)")
        ->check(CLI::ExistingFile);
    app.add_option("--seek-model", dev.seek_model, "average|distance")
        ->check(CLI::IsMember({"average", "distance"}));

    auto* info = app.add_subcommand("info", "print device and derived parameters");

    auto* map = app.add_subcommand("map", "convert between RS and physical addresses");
    std::string direction;
    std::vector<uint32_t> coords;
    map->add_option("direction", direction, "rs2mems | mems2rs")
        ->required()
        ->check(CLI::IsMember({"rs2mems", "mems2rs"}));
    map->add_option("coords", coords, "r s | r_x r_y s_x s_y")->required();

    auto* plan_cmd = app.add_subcommand("plan", "time an access plan in text form");
    std::string plan_path;
    plan_cmd->add_option("file", plan_path, "plan file, '-' for stdin")->required();

    auto* bench = app.add_subcommand("bench", "run placement experiments");
    bench->require_subcommand(1);

    RelationalConfig rcfg;
    auto* rel = bench->add_subcommand("relational", "experiments 1 and 2");
    std::vector<std::string> r_place, r_sizes, r_nproj;
    std::string r_out, r_exp = "all", r_qual = "uniform";
    rel->add_option("--placement", r_place, "comma-separated placements")->delimiter(',');
    rel->add_option("--sizes", r_sizes, "experiment 1 data sizes, MiB")->delimiter(',');
    rel->add_option("--nproj", r_nproj, "experiment 2 projection counts")->delimiter(',');
    rel->add_option("--selectivity", rcfg.selectivity, "fraction of qualifying tuples")
        ->check(CLI::Range(0.0, 1.0));
    rel->add_option("--experiment", r_exp, "1|2|all")->check(CLI::IsMember({"1", "2", "all"}));
    rel->add_option("--qualifying", r_qual, "uniform|clustered")
        ->check(CLI::IsMember({"uniform", "clustered"}));
    rel->add_option("--seed", rcfg.seed, "base seed");
    rel->add_option("--repeats", rcfg.repeats, "seeds per sweep point")->check(CLI::PositiveNumber);
    rel->add_option("--out", r_out, "CSV path, '-' for stdout");

    SpatialConfig scfg;
    auto* spa = bench->add_subcommand("spatial", "experiments 3 and 4");
    std::vector<std::string> s_place, s_sizes, s_aspects;
    std::string s_out, s_exp = "all", s_curve = "hilbert", s_ratio, s_profile;
    spa->add_option("--placement", s_place, "comma-separated placements")->delimiter(',');
    spa->add_option("--query-sizes", s_sizes, "experiment 3 query sizes, percent of the space")
        ->delimiter(',');
    spa->add_option("--aspects", s_aspects, "experiment 4 aspect ratios, e.g. 16,1,1/16")
        ->delimiter(',');
    spa->add_option("--experiment", s_exp, "3|4|all")->check(CLI::IsMember({"3", "4", "all"}));
    spa->add_option("--curve", s_curve, "hilbert|zorder")->check(CLI::IsMember({"hilbert", "zorder"}));
    spa->add_option("--block-ratio", s_ratio, "fixed block aspect ratio B_x/B_y");
    spa->add_option("--profile", s_profile, "workload profile file ('f qx qy' lines)")
        ->check(CLI::ExistingFile);
    spa->add_flag("--whole-groups", scfg.whole_group_reads, "read whole blocks of partial overlaps");
    spa->add_option("--objects", scfg.objects, "object count (perfect square)");
    spa->add_option("--seed", scfg.seed, "base seed");
    spa->add_option("--repeats", scfg.repeats, "query origins per sweep point")
        ->check(CLI::PositiveNumber);
    spa->add_option("--out", s_out, "CSV path, '-' for stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        const DeviceParams p = dev.resolve();
        if (*info) {
            print_info(p);
        } else if (*map) {
            if (direction == "rs2mems") {
                if (coords.size() != 2) throw std::invalid_argument("rs2mems takes: r s");
                const PhysAddr a = rs_to_mems({coords[0], coords[1]}, p);
                std::printf("%u %u %u %u\n", a.r_x, a.r_y, a.s_x, a.s_y);
            } else {
                if (coords.size() != 4) throw std::invalid_argument("mems2rs takes: r_x r_y s_x s_y");
                const RSAddr a = mems_to_rs({coords[0], coords[1], coords[2], coords[3]}, p);
                std::printf("%u %u\n", a.r, a.s);
            }
        } else if (*plan_cmd) {
            std::string text;
            if (plan_path == "-") {
                text.assign(std::istreambuf_iterator<char>(std::cin), {});
            } else {
                std::ifstream in(plan_path);
                if (!in) throw std::runtime_error("cannot read " + plan_path);
                text.assign(std::istreambuf_iterator<char>(in), {});
            }
            Emulator emu(p);
            const Timing t = emu.execute(parse_plan_text(text));
            std::printf("total_s = %.9g\nseek_s = %.9g\ntransfer_s = %.9g\nsettle_s = %.9g\n"
                        "turnaround_s = %.9g\nn_seeks = %llu\nn_row_steps = %llu\nsectors = %llu\n",
                        t.total_s, t.seek_s, t.transfer_s, t.settle_s, t.turnaround_s,
                        (unsigned long long)t.n_seeks, (unsigned long long)t.n_row_steps,
                        (unsigned long long)t.sectors);
        } else if (*rel) {
            rcfg.device = p;
            if (!r_place.empty()) rcfg.placements = split_list(r_place);
            if (!r_sizes.empty()) {
                rcfg.sizes_mb.clear();
                for (const auto& s : split_list(r_sizes)) rcfg.sizes_mb.push_back(parse_ratio(s));
            }
            if (!r_nproj.empty()) {
                rcfg.nproj.clear();
                for (const auto& s : split_list(r_nproj)) rcfg.nproj.push_back(uint32_t(std::stoul(s)));
            }
            rcfg.experiment1 = r_exp != "2";
            rcfg.experiment2 = r_exp != "1";
            rcfg.qualifying = parse_qualifying(r_qual);
            emit(r_out, run_relational(rcfg), false);
        } else if (*spa) {
            scfg.device = p;
            if (!s_place.empty()) scfg.placements = split_list(s_place);
            if (!s_sizes.empty()) {
                scfg.query_sizes.clear();
                for (const auto& s : split_list(s_sizes)) scfg.query_sizes.push_back(parse_percent(s));
            }
            if (!s_aspects.empty()) {
                scfg.aspects.clear();
                for (const auto& s : split_list(s_aspects)) scfg.aspects.push_back(parse_ratio(s));
            }
            scfg.experiment3 = s_exp != "4";
            scfg.experiment4 = s_exp != "3";
            scfg.curve = parse_curve(s_curve);
            if (!s_ratio.empty()) scfg.block_ratio = parse_ratio(s_ratio);
            if (!s_profile.empty()) {
                std::ifstream in(s_profile);
                std::string text((std::istreambuf_iterator<char>(in)), {});
                scfg.profile = parse_profile(text);
            }
            emit(s_out, run_spatial(scfg), true);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "memsbench: %s\n", e.what());
        return 1;
    }
    return 0;
}
