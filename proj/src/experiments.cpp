#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <map>
#include <stdexcept>
#include <thread>

#include "util.hpp"

namespace tilecache {

using nlohmann::json;

GenConfig config_from_json(const std::string& text) {
    json j = json::parse(text);
    GenConfig c;
    c.num_sbs = j.value("num_sbs", c.num_sbs);
    c.sbs_ring_radius_m = j.value("sbs_ring_radius_m", c.sbs_ring_radius_m);
    c.sbs_radius_m = j.value("sbs_radius_m", c.sbs_radius_m);
    c.mbs_radius_m = j.value("mbs_radius_m", c.mbs_radius_m);
    c.cache_fraction = j.value("cache_fraction", c.cache_fraction);
    c.cache_mbits_override = j.value("cache_mbits", c.cache_mbits_override);
    c.num_users = j.value("num_users", c.num_users);
    c.user_placement_radius_m = j.value("user_placement_radius_m", c.user_placement_radius_m);
    c.sbs_delay_s_per_mbit = j.value("sbs_delay_s_per_mbit", c.sbs_delay_s_per_mbit);
    c.backhaul_delay_s_per_mbit = j.value("backhaul_delay_s_per_mbit", c.backhaul_delay_s_per_mbit);
    c.num_videos = j.value("num_videos", c.num_videos);
    c.num_gops = j.value("num_gops", c.num_gops);
    c.num_layers = j.value("num_layers", c.num_layers);
    if (j.contains("grid")) {
        c.grid_rows = j.at("grid").value("rows", c.grid_rows);
        c.grid_cols = j.at("grid").value("cols", c.grid_cols);
    }
    if (j.contains("viewport")) {
        c.viewport_rows = j.at("viewport").value("rows", c.viewport_rows);
        c.viewport_cols = j.at("viewport").value("cols", c.viewport_cols);
    }
    c.zipf_eta = j.value("zipf_eta", c.zipf_eta);
    if (j.contains("viewport_distribution"))
        c.viewport_dist = viewport_dist_from_name(j.at("viewport_distribution").get<std::string>());
    c.t_app_s = j.value("t_app_s", c.t_app_s);
    c.t_disp_s = j.value("t_disp_s", c.t_disp_s);
    c.seed = j.value("seed", c.seed);
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        c.solver.w = s.value("w", c.solver.w);
        c.solver.epsilon = s.value("epsilon", c.solver.epsilon);
        c.solver.tau_max = s.value("tau_max", c.solver.tau_max);
        c.solver.stall_window = s.value("stall_window", c.solver.stall_window);
        c.solver.no_progress_window =
            s.value("no_progress_window", c.solver.no_progress_window);
        c.solver.lambda0 = s.value("lambda0", c.solver.lambda0);
        c.solver.paper_subgradient = s.value("subgradient", std::string("exact")) == "paper";
    }
    c.softchr_realizations = j.value("softchr_realizations", c.softchr_realizations);
    return c;
}

std::string config_to_json(const GenConfig& c) {
    json j;
    j["num_sbs"] = c.num_sbs;
    j["sbs_ring_radius_m"] = c.sbs_ring_radius_m;
    j["sbs_radius_m"] = c.sbs_radius_m;
    j["mbs_radius_m"] = c.mbs_radius_m;
    j["cache_fraction"] = c.cache_fraction;
    if (c.cache_mbits_override >= 0.0) j["cache_mbits"] = c.cache_mbits_override;
    j["num_users"] = c.num_users;
    j["user_placement_radius_m"] = c.user_placement_radius_m;
    j["sbs_delay_s_per_mbit"] = c.sbs_delay_s_per_mbit;
    j["backhaul_delay_s_per_mbit"] = c.backhaul_delay_s_per_mbit;
    j["num_videos"] = c.num_videos;
    j["num_gops"] = c.num_gops;
    j["num_layers"] = c.num_layers;
    j["grid"] = {{"rows", c.grid_rows}, {"cols", c.grid_cols}};
    j["viewport"] = {{"rows", c.viewport_rows}, {"cols", c.viewport_cols}};
    j["zipf_eta"] = c.zipf_eta;
    j["viewport_distribution"] = viewport_dist_name(c.viewport_dist);
    j["t_app_s"] = c.t_app_s;
    j["t_disp_s"] = c.t_disp_s;
    j["seed"] = c.seed;
    j["solver"] = {{"w", c.solver.w},
                   {"epsilon", c.solver.epsilon},
                   {"tau_max", c.solver.tau_max},
                   {"stall_window", c.solver.stall_window},
                   {"no_progress_window", c.solver.no_progress_window},
                   {"lambda0", c.solver.lambda0},
                   {"subgradient", c.solver.paper_subgradient ? "paper" : "exact"}};
    j["softchr_realizations"] = c.softchr_realizations;
    return j.dump(2) + "\n";
}

Scenario generate_scenario(const GenConfig& c) {
    if (c.num_sbs < 1) throw std::invalid_argument("config.num_sbs: need at least one SBS");
    if (c.num_users < 0) throw std::invalid_argument("config.num_users: must be >= 0");
    if (c.user_placement_radius_m <= 0.0)
        throw std::invalid_argument("config.user_placement_radius_m: must be > 0");

    Scenario s;
    s.seed = c.seed;
    s.zipf_eta = c.zipf_eta;
    s.viewport_dist = c.viewport_dist;
    s.t_app_s = c.t_app_s;
    s.t_disp_s = c.t_disp_s;
    s.solver = c.solver;

    s.library.num_videos = c.num_videos;
    s.library.num_gops = c.num_gops;
    s.library.num_layers = c.num_layers;
    s.library.grid = {c.grid_rows, c.grid_cols};
    s.library.viewport_rows = c.viewport_rows;
    s.library.viewport_cols = c.viewport_cols;
    s.library.classes = reference_classes();
    s.library.class_of = default_class_mix(c.num_videos);
    s.library.viewports = default_viewports(s.library.grid, c.viewport_rows, c.viewport_cols);

    for (int n = 0; n < c.num_sbs; ++n) {
        double angle = 2.0 * M_PI * n / c.num_sbs;
        s.network.sbs_pos.push_back(
            {c.sbs_ring_radius_m * std::cos(angle), c.sbs_ring_radius_m * std::sin(angle)});
        s.network.sbs_radius.push_back(c.sbs_radius_m);
    }
    s.network.mbs_pos = {0.0, 0.0};
    s.network.mbs_radius = c.mbs_radius_m;

    double capacity = c.cache_mbits_override >= 0.0
                          ? c.cache_mbits_override
                          : c.cache_fraction * s.library.total_size_mbits();
    s.network.cache_capacity_mbits.assign(c.num_sbs, capacity);

    // Users uniform inside the union of placement disks, by rejection from the
    // bounding box.
    double r = c.user_placement_radius_m;
    double min_x = s.network.sbs_pos[0].x, max_x = min_x;
    double min_y = s.network.sbs_pos[0].y, max_y = min_y;
    for (const auto& p : s.network.sbs_pos) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    min_x -= r;
    max_x += r;
    min_y -= r;
    max_y += r;
    Rng rng(substream(c.seed, 0x0e1ace9dULL));
    while (s.users.count() < c.num_users) {
        Vec2 p{rng.uniform(min_x, max_x), rng.uniform(min_y, max_y)};
        bool inside = false;
        for (const auto& b : s.network.sbs_pos)
            if (distance(p, b) <= r) {
                inside = true;
                break;
            }
        if (inside) s.users.pos.push_back(p);
    }

    s.network.sbs_delay.assign(c.num_users, std::vector<double>(c.num_sbs, c.sbs_delay_s_per_mbit));
    s.network.backhaul_delay.assign(c.num_users, c.backhaul_delay_s_per_mbit);

    s.association = build_association(s.network, s.users);
    s.validate();
    return s;
}

SweepAxis sweep_axis_from_name(const std::string& name) {
    if (name == "cache") return SweepAxis::Cache;
    if (name == "radius") return SweepAxis::Radius;
    if (name == "sbs_delay") return SweepAxis::SbsDelay;
    if (name == "backhaul_delay") return SweepAxis::BackhaulDelay;
    if (name == "zipf") return SweepAxis::Zipf;
    if (name == "viewport") return SweepAxis::Viewport;
    throw std::invalid_argument(
        "unknown sweep axis '" + name +
        "' (expected cache, radius, sbs_delay, backhaul_delay, zipf or viewport)");
}

const char* sweep_axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Cache: return "cache";
        case SweepAxis::Radius: return "radius";
        case SweepAxis::SbsDelay: return "sbs_delay";
        case SweepAxis::BackhaulDelay: return "backhaul_delay";
        case SweepAxis::Zipf: return "zipf";
        case SweepAxis::Viewport: return "viewport";
    }
    return "cache";
}

namespace {

struct AxisRange {
    double lo;
    double hi;
};

void warn_if_extrapolating(SweepAxis axis, double value) {
    AxisRange range{};
    switch (axis) {
        case SweepAxis::Cache: range = {5.0, 25.0}; break;
        case SweepAxis::Radius: range = {200.0, 300.0}; break;
        case SweepAxis::SbsDelay: range = {0.5, 2.5}; break;
        case SweepAxis::BackhaulDelay: range = {5.0, 15.0}; break;
        case SweepAxis::Zipf: range = {0.5, 2.5}; break;
        case SweepAxis::Viewport: return;
    }
    if (value < range.lo || value > range.hi)
        log_info(std::string(sweep_axis_name(axis)) + "=" + fmt_double(value) +
                 " is outside the documented range [" + fmt_double(range.lo) + ", " +
                 fmt_double(range.hi) + "]; extrapolating");
}

}  // namespace

GenConfig apply_axis(const GenConfig& base, SweepAxis axis, const std::string& value) {
    GenConfig c = base;
    if (axis == SweepAxis::Viewport) {
        c.viewport_dist = viewport_dist_from_name(value);
        return c;
    }
    double num = std::stod(value);
    warn_if_extrapolating(axis, num);
    switch (axis) {
        case SweepAxis::Cache: c.cache_fraction = num / 100.0; break;
        case SweepAxis::Radius: c.sbs_radius_m = num; break;
        case SweepAxis::SbsDelay: c.sbs_delay_s_per_mbit = num; break;
        case SweepAxis::BackhaulDelay: c.backhaul_delay_s_per_mbit = num; break;
        case SweepAxis::Zipf: c.zipf_eta = num; break;
        case SweepAxis::Viewport: break;
    }
    return c;
}

std::string sweep_csv_header() { return "scheme,axis,value,seed,D,chr,soft_chr,gap,iters,time_s"; }

SweepResult run_sweep(const SweepRequest& request) {
    if (request.values.empty()) throw std::invalid_argument("sweep: no axis values given");
    if (request.schemes.empty()) throw std::invalid_argument("sweep: no schemes given");
    if (request.seeds < 1) throw std::invalid_argument("sweep: need at least one seed");

    struct Job {
        Scheme scheme;
        std::string value;
        uint64_t seed;
    };
    std::vector<Job> jobs;
    for (Scheme scheme : request.schemes)
        for (const std::string& value : request.values)
            for (int rep = 0; rep < request.seeds; ++rep)
                jobs.push_back({scheme, value, request.base.seed + static_cast<uint64_t>(rep)});

    std::vector<SweepRow> rows(jobs.size());
    int workers = request.jobs > 0 ? request.jobs
                                   : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    log_info("sweep: " + std::to_string(jobs.size()) + " runs on " + std::to_string(workers) +
             " workers");

    parallel_for(static_cast<int>(jobs.size()), workers, [&](int i) {
        const Job& job = jobs[i];
        GenConfig config = apply_axis(request.base, request.axis, job.value);
        config.seed = job.seed;
        Scenario scenario = generate_scenario(config);
        SchemeResult result = run_scheme(scenario, job.scheme, config.softchr_realizations);
        SweepRow row;
        row.scheme = scheme_name(job.scheme);
        row.axis = sweep_axis_name(request.axis);
        row.value = job.value;
        row.seed = job.seed;
        row.D = result.D;
        row.chr = result.chr;
        row.soft_chr = result.soft_chr;
        row.gap = result.solution.report.max_final_gap();
        row.iters = result.solution.report.total_iterations();
        row.time_s = result.solution.report.wall_s;
        rows[i] = std::move(row);
        log_info("sweep: done " + rows[i].scheme + " " + rows[i].axis + "=" + rows[i].value +
                 " seed=" + std::to_string(job.seed) + " D=" + fmt_double(rows[i].D));
    });

    SweepResult out;
    out.rows = rows;
    out.csv = sweep_csv_header() + "\n";
    for (const SweepRow& r : rows) {
        out.csv += r.scheme + ',' + r.axis + ',' + r.value + ',' + std::to_string(r.seed) + ',' +
                   fmt_double(r.D) + ',' + fmt_double(r.chr) + ',' + fmt_double(r.soft_chr) + ',' +
                   fmt_double(r.gap) + ',' + std::to_string(r.iters) + ',' + fmt_double(r.time_s) +
                   '\n';
    }

    // Replication summary: mean and standard error over seeds.
    out.summary_csv =
        "scheme,axis,value,n,d_mean,d_se,chr_mean,chr_se,soft_chr_mean,soft_chr_se\n";
    for (Scheme scheme : request.schemes) {
        for (const std::string& value : request.values) {
            std::vector<const SweepRow*> group;
            for (const SweepRow& r : rows)
                if (r.scheme == scheme_name(scheme) && r.value == value) group.push_back(&r);
            auto mean_se = [&](auto getter) {
                double mean = 0.0;
                for (auto* r : group) mean += getter(*r);
                mean /= group.size();
                double var = 0.0;
                for (auto* r : group) var += (getter(*r) - mean) * (getter(*r) - mean);
                double se = group.size() > 1
                                ? std::sqrt(var / (group.size() - 1.0) / group.size())
                                : 0.0;
                return std::pair<double, double>{mean, se};
            };
            auto [dm, dse] = mean_se([](const SweepRow& r) { return r.D; });
            auto [cm, cse] = mean_se([](const SweepRow& r) { return r.chr; });
            auto [sm, sse] = mean_se([](const SweepRow& r) { return r.soft_chr; });
            out.summary_csv += std::string(scheme_name(scheme)) + ',' +
                               sweep_axis_name(request.axis) + ',' + value + ',' +
                               std::to_string(group.size()) + ',' + fmt_double(dm) + ',' +
                               fmt_double(dse) + ',' + fmt_double(cm) + ',' + fmt_double(cse) +
                               ',' + fmt_double(sm) + ',' + fmt_double(sse) + '\n';
        }
    }
    return out;
}

}  // namespace tilecache
