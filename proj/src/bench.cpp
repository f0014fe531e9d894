#include "mems/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace mems {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

struct Accum {
    double meas = 0, est = 0, lb = 0, seek = 0, transfer = 0, scans = 0, kp = 0, kr = 0, blocks = 0;
    double margin = HUGE_VAL;

    void add_run(const Timing& t, size_t n_scans, const DeviceParams& p, const RSParams& rs,
                 double lb_bits) {
        const CostInput ci = cost_input_from_trace(t, p, rs);
        const double bound = lower_bound(lb_bits, rs).total_s;
        meas += t.total_s;
        est += estimate(ci, rs).total_s;
        lb += bound;
        margin = std::min(margin, t.total_s - bound);
        seek += t.total_s - t.transfer_s;
        transfer += t.transfer_s;
        scans += double(n_scans);
        kp += ci.k_parallel;
        kr += ci.k_random;
    }

    void add_lower_bound(double bits, const RSParams& rs) {
        const CostEstimate e = lower_bound(bits, rs);
        meas += e.total_s;
        est += e.total_s;
        lb += e.total_s;
        transfer += e.transfer_s;
        kp += rs.max_active_tips;
        margin = 0;
    }

    void finish(BenchRow& row, uint32_t repeats) const {
        const double r = repeats;
        row.meas_total_s = meas / r;
        row.est_total_s = est / r;
        row.lb_total_s = lb / r;
        row.seek_s = seek / r;
        row.transfer_s = transfer / r;
        row.scans = scans / r;
        row.k_parallel = kp / r;
        row.k_random = kr / r;
        row.n_query_blocks = blocks / r;
        row.min_lb_margin_s = margin;
    }
};

void check_placements(const std::vector<std::string>& chosen, const std::vector<std::string>& known) {
    for (const auto& c : chosen)
        if (std::find(known.begin(), known.end(), c) == known.end())
            throw std::invalid_argument("unknown placement: " + c);
}

Timing run_plan(const AccessPlan& plan, const DeviceParams& p) {
    Emulator emu(p);
    return emu.execute(plan);
}

}  // namespace

double parse_ratio(const std::string& s) {
    size_t used = 0;
    double v = 0;
    if (auto slash = s.find('/'); slash != std::string::npos) {
        const double a = std::stod(s.substr(0, slash), &used);
        if (used != slash) throw std::invalid_argument("bad ratio: " + s);
        const std::string rest = s.substr(slash + 1);
        const double b = std::stod(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("bad ratio: " + s);
        v = a / b;
    } else {
        v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("bad ratio: " + s);
    }
    if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument("ratio must be positive: " + s);
    return v;
}

std::vector<BenchRow> run_relational(const RelationalConfig& cfg) {
    check_placements(cfg.placements, kRelationalPlacements);
    if (cfg.repeats == 0) throw std::invalid_argument("repeats must be at least 1");
    const DeviceParams& p = cfg.device;
    const RSParams rs = rs_params(p);

    struct Point {
        std::string experiment;
        double size_mb;
        uint32_t nproj;
        double sweep;
    };
    std::vector<Point> points;
    if (cfg.experiment1)
        for (double mb : cfg.sizes_mb) points.push_back({"exp1", mb, cfg.exp1_nproj, mb});
    if (cfg.experiment2)
        for (uint32_t np : cfg.nproj) points.push_back({"exp2", cfg.exp2_size_mb, np, double(np)});

    std::vector<BenchRow> rows;
    for (const Point& pt : points) {
        if (!(pt.size_mb > 0)) throw std::invalid_argument("data size must be positive");
        const uint32_t n =
            tuples_for_size(uint64_t(pt.size_mb * double(kMiB) + 0.5), cfg.k, cfg.attr_bytes);
        const RelationSchema schema{cfg.k, cfg.attr_bytes * 8, n};
        if (pt.nproj == 0 || pt.nproj > cfg.k)
            throw std::invalid_argument("N_projection must be in [1, k]");

        std::optional<RelLayoutRP> rp;
        std::optional<RelLayoutRSY> rsy;
        std::optional<NsmLayout> nsm;
        std::optional<DsmLayout> dsm;
        auto wants = [&](const char* name) {
            return std::find(cfg.placements.begin(), cfg.placements.end(), name) !=
                   cfg.placements.end();
        };
        if (wants("relational-parallel")) rp.emplace(schema, p);
        if (wants("relational-sequential-yu")) rsy.emplace(schema, p);
        if (wants("nsm-griffin")) nsm.emplace(schema, p);
        if (wants("dsm-griffin")) dsm.emplace(schema, p);

        std::vector<Accum> acc(cfg.placements.size());
        for (uint32_t r = 0; r < cfg.repeats; ++r) {
            const Relation rel = gen_relation(n, cfg.k, cfg.attr_bytes, cfg.seed + r,
                                              cfg.selectivity, cfg.qualifying, p);
            const RangeQuery q = make_range_query(pt.nproj, cfg.selectivity, rel.bound);
            const double result_bits =
                double(pt.nproj) * double(rel.qualifying.size()) * schema.attr_bits;
            for (size_t i = 0; i < cfg.placements.size(); ++i) {
                const std::string& name = cfg.placements[i];
                if (name == "relational-lowerbound") {
                    acc[i].add_lower_bound(result_bits, rs);
                    continue;
                }
                AccessPlan plan;
                if (name == "relational-parallel") plan = rp->compile(q, rel.qualifying);
                else if (name == "relational-sequential-yu") plan = rsy->compile(q);
                else if (name == "nsm-griffin") plan = nsm->compile(q);
                else plan = dsm->compile(q);
                acc[i].add_run(run_plan(plan, p), plan.scans.size(), p, rs, result_bits);
            }
        }
        for (size_t i = 0; i < cfg.placements.size(); ++i) {
            BenchRow row;
            row.experiment = pt.experiment;
            row.placement = cfg.placements[i];
            row.sweep = pt.sweep;
            row.data_mb = pt.size_mb;
            row.n_projection = pt.nproj;
            row.selectivity = cfg.selectivity;
            row.seed = cfg.seed;
            acc[i].finish(row, cfg.repeats);
            rows.push_back(std::move(row));
        }
    }
    sort_rows(rows);
    return rows;
}

std::vector<BenchRow> run_spatial(const SpatialConfig& cfg) {
    check_placements(cfg.placements, kSpatialPlacements);
    if (cfg.repeats == 0) throw std::invalid_argument("repeats must be at least 1");
    const DeviceParams& p = cfg.device;
    const RSParams rs = rs_params(p);
    const SpatialData data = gen_spatial(cfg.objects, cfg.obj_bytes, cfg.seed, p);
    const SpatialSpace& space = data.space;
    const double data_mb = double(cfg.objects) * cfg.obj_bytes / 1e6;  // decimal MB

    struct Point {
        std::string experiment;
        double size;
        double aspect;
        double sweep;
    };
    std::vector<Point> points;
    if (cfg.experiment3)
        for (double s : cfg.query_sizes) points.push_back({"exp3", s, 1.0, s});
    if (cfg.experiment4)
        for (double a : cfg.aspects) points.push_back({"exp4", cfg.exp4_size, a, a});

    std::optional<SpatialLayoutSSY> ssy;
    if (std::find(cfg.placements.begin(), cfg.placements.end(), "spatial-sequential-yu") !=
        cfg.placements.end())
        ssy.emplace(space, p);
    const bool want_sp = std::find(cfg.placements.begin(), cfg.placements.end(),
                                   "spatial-parallel") != cfg.placements.end();

    std::vector<BenchRow> rows;
    for (size_t pi = 0; pi < points.size(); ++pi) {
        const Point& pt = points[pi];
        const QueryRegion shape = query_shape(space, pt.size, pt.aspect);
        std::optional<SpatialLayoutSP> sp;
        if (want_sp) {
            const double ratio = cfg.block_ratio ? *cfg.block_ratio
                                 : !cfg.profile.entries.empty() ? cfg.profile.weighted_aspect()
                                                                : shape.aspect();
            sp.emplace(space, build_block_grid(space, ratio, p, cfg.curve), p,
                       cfg.whole_group_reads);
        }

        std::vector<Accum> acc(cfg.placements.size());
        for (uint32_t r = 0; r < cfg.repeats; ++r) {
            std::mt19937_64 rng(mix64(cfg.seed ^ mix64((uint64_t(pi) << 32) | r)));
            const QueryRegion q = gen_query_region(space, pt.size, pt.aspect, rng);
            const double result_bits = double(q.size()) * space.obj_bits;
            for (size_t i = 0; i < cfg.placements.size(); ++i) {
                const std::string& name = cfg.placements[i];
                if (name == "spatial-lowerbound") {
                    acc[i].add_lower_bound(result_bits, rs);
                    continue;
                }
                const AccessPlan plan = name == "spatial-parallel" ? sp->compile(q) : ssy->compile(q);
                acc[i].add_run(run_plan(plan, p), plan.scans.size(), p, rs, result_bits);
                if (name == "spatial-parallel") acc[i].blocks += double(sp->query_blocks(q).size());
            }
        }
        for (size_t i = 0; i < cfg.placements.size(); ++i) {
            BenchRow row;
            row.experiment = pt.experiment;
            row.placement = cfg.placements[i];
            row.sweep = pt.sweep;
            row.data_mb = data_mb;
            row.query_size = pt.size;
            row.aspect = pt.aspect;
            row.qx = shape.qx;
            row.qy = shape.qy;
            row.seed = cfg.seed;
            acc[i].finish(row, cfg.repeats);
            rows.push_back(std::move(row));
        }
    }
    sort_rows(rows);
    return rows;
}

void sort_rows(std::vector<BenchRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
        if (a.experiment != b.experiment) return a.experiment < b.experiment;
        if (a.placement != b.placement) return a.placement < b.placement;
        return a.sweep < b.sweep;
    });
}

void write_relational_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "experiment,placement,data_mb,n_projection,selectivity,meas_total_s,est_total_s,"
           "lb_total_s,seek_s,transfer_s,scans,k_parallel,k_random,seed\n";
    for (const auto& r : rows)
        out << r.experiment << ',' << r.placement << ',' << num(r.data_mb) << ',' << r.n_projection
            << ',' << num(r.selectivity) << ',' << num(r.meas_total_s) << ','
            << num(r.est_total_s) << ',' << num(r.lb_total_s) << ',' << num(r.seek_s) << ','
            << num(r.transfer_s) << ',' << num(r.scans) << ',' << num(r.k_parallel) << ','
            << num(r.k_random) << ',' << r.seed << '\n';
}

void write_spatial_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "experiment,placement,data_mb,query_size,aspect,meas_total_s,est_total_s,lb_total_s,"
           "seek_s,transfer_s,scans,k_parallel,k_random,seed,qx,qy,n_query_blocks\n";
    for (const auto& r : rows)
        out << r.experiment << ',' << r.placement << ',' << num(r.data_mb) << ','
            << num(r.query_size) << ',' << num(r.aspect) << ',' << num(r.meas_total_s) << ','
            << num(r.est_total_s) << ',' << num(r.lb_total_s) << ',' << num(r.seek_s) << ','
            << num(r.transfer_s) << ',' << num(r.scans) << ',' << num(r.k_parallel) << ','
            << num(r.k_random) << ',' << r.seed << ',' << num(r.qx) << ',' << num(r.qy) << ','
            << num(r.n_query_blocks) << '\n';
}

}  // namespace mems
