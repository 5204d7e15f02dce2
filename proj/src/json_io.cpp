#include "json_io.hpp"

#include <json.hpp>
#include <stdexcept>

#include "util.hpp"

namespace tilecache {

using nlohmann::json;

namespace {

json viewport_to_json(const Viewport& w) {
    json out;
    out["id"] = w.id + 1;
    json tiles = json::array();
    for (int t : w.tiles) tiles.push_back(t + 1);
    out["tiles"] = tiles;
    return out;
}

Viewport viewport_from_json(const json& j, int tile_count) {
    Viewport w;
    w.id = j.at("id").get<int>() - 1;
    for (int t : j.at("tiles")) {
        if (t < 1 || t > tile_count)
            throw std::invalid_argument("library.viewports: tile index out of grid");
        w.tiles.push_back(t - 1);
    }
    return w;
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["seed"] = s.seed;

    json lib;
    lib["num_videos"] = s.library.num_videos;
    lib["num_gops"] = s.library.num_gops;
    lib["num_layers"] = s.library.num_layers;
    lib["grid"] = {{"rows", s.library.grid.rows}, {"cols", s.library.grid.cols}};
    lib["viewport"] = {{"rows", s.library.viewport_rows}, {"cols", s.library.viewport_cols}};
    json classes = json::array();
    for (const auto& c : s.library.classes)
        classes.push_back({{"name", c.name},
                           {"size_per_tile_mbits", c.size_per_tile},
                           {"delta_per_tile", c.delta_per_tile}});
    lib["classes"] = classes;
    json class_of = json::array();
    for (int c : s.library.class_of) class_of.push_back(c + 1);
    lib["class_of"] = class_of;
    json vps = json::array();
    for (const auto& w : s.library.viewports) vps.push_back(viewport_to_json(w));
    lib["viewports"] = vps;
    j["library"] = lib;

    json net;
    json sbs = json::array();
    for (int n = 0; n < s.network.num_sbs(); ++n)
        sbs.push_back({{"x", s.network.sbs_pos[n].x},
                       {"y", s.network.sbs_pos[n].y},
                       {"radius_m", s.network.sbs_radius[n]},
                       {"cache_mbits", s.network.cache_capacity_mbits[n]}});
    net["sbs"] = sbs;
    net["mbs"] = {{"x", s.network.mbs_pos.x},
                  {"y", s.network.mbs_pos.y},
                  {"radius_m", s.network.mbs_radius}};
    net["sbs_delay_s_per_mbit"] = s.network.sbs_delay;
    net["backhaul_delay_s_per_mbit"] = s.network.backhaul_delay;
    j["network"] = net;

    json users = json::array();
    for (const auto& p : s.users.pos) users.push_back({{"x", p.x}, {"y", p.y}});
    j["users"] = users;

    j["demand"] = {{"zipf_eta", s.zipf_eta},
                   {"viewport_distribution", viewport_dist_name(s.viewport_dist)}};
    j["timing"] = {{"t_app_s", s.t_app_s}, {"t_disp_s", s.t_disp_s}};
    j["solver"] = {{"w", s.solver.w},
                   {"epsilon", s.solver.epsilon},
                   {"tau_max", s.solver.tau_max},
                   {"stall_window", s.solver.stall_window},
                   {"no_progress_window", s.solver.no_progress_window},
                   {"lambda0", s.solver.lambda0},
                   {"subgradient", s.solver.paper_subgradient ? "paper" : "exact"}};
    return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
    json j = json::parse(text);
    Scenario s;
    s.seed = j.value("seed", uint64_t{1});

    const json& lib = j.at("library");
    s.library.num_videos = lib.at("num_videos").get<int>();
    s.library.num_gops = lib.at("num_gops").get<int>();
    s.library.num_layers = lib.at("num_layers").get<int>();
    s.library.grid.rows = lib.at("grid").at("rows").get<int>();
    s.library.grid.cols = lib.at("grid").at("cols").get<int>();
    if (lib.contains("viewport")) {
        s.library.viewport_rows = lib.at("viewport").at("rows").get<int>();
        s.library.viewport_cols = lib.at("viewport").at("cols").get<int>();
    }
    for (const json& c : lib.at("classes")) {
        VideoClass cls;
        cls.name = c.at("name").get<std::string>();
        cls.size_per_tile = c.at("size_per_tile_mbits").get<std::vector<double>>();
        cls.delta_per_tile = c.at("delta_per_tile").get<std::vector<double>>();
        s.library.classes.push_back(cls);
    }
    for (int c : lib.at("class_of")) s.library.class_of.push_back(c - 1);
    if (lib.contains("viewports")) {
        for (const json& w : lib.at("viewports"))
            s.library.viewports.push_back(viewport_from_json(w, s.library.grid.tile_count()));
    } else {
        s.library.viewports = default_viewports(s.library.grid, s.library.viewport_rows,
                                                s.library.viewport_cols);
    }

    const json& net = j.at("network");
    for (const json& b : net.at("sbs")) {
        s.network.sbs_pos.push_back({b.at("x").get<double>(), b.at("y").get<double>()});
        s.network.sbs_radius.push_back(b.at("radius_m").get<double>());
        s.network.cache_capacity_mbits.push_back(b.at("cache_mbits").get<double>());
    }
    s.network.mbs_pos = {net.at("mbs").at("x").get<double>(), net.at("mbs").at("y").get<double>()};
    s.network.mbs_radius = net.at("mbs").at("radius_m").get<double>();

    for (const json& p : j.at("users")) s.users.pos.push_back({p.at("x").get<double>(), p.at("y").get<double>()});

    int U = s.users.count();
    int N = s.network.num_sbs();
    const json& sd = net.at("sbs_delay_s_per_mbit");
    if (sd.is_number()) {
        s.network.sbs_delay.assign(U, std::vector<double>(N, sd.get<double>()));
    } else {
        s.network.sbs_delay = sd.get<std::vector<std::vector<double>>>();
    }
    const json& bd = net.at("backhaul_delay_s_per_mbit");
    if (bd.is_number()) {
        s.network.backhaul_delay.assign(U, bd.get<double>());
    } else {
        s.network.backhaul_delay = bd.get<std::vector<double>>();
    }

    const json& dem = j.at("demand");
    s.zipf_eta = dem.at("zipf_eta").get<double>();
    s.viewport_dist = viewport_dist_from_name(dem.at("viewport_distribution").get<std::string>());
    s.t_app_s = j.at("timing").at("t_app_s").get<double>();
    s.t_disp_s = j.at("timing").at("t_disp_s").get<double>();
    if (j.contains("solver")) {
        const json& sol = j.at("solver");
        s.solver.w = sol.value("w", s.solver.w);
        s.solver.epsilon = sol.value("epsilon", 0.01);
        s.solver.tau_max = sol.value("tau_max", 1000);
        s.solver.stall_window = sol.value("stall_window", s.solver.stall_window);
        s.solver.no_progress_window =
            sol.value("no_progress_window", s.solver.no_progress_window);
        s.solver.lambda0 = sol.value("lambda0", 0.2);
        s.solver.paper_subgradient = sol.value("subgradient", std::string("exact")) == "paper";
    }

    s.association = build_association(s.network, s.users);
    s.validate();
    return s;
}

std::string demand_to_json(const Scenario& s) {
    std::vector<double> video_pmf = zipf_pmf(s.library.num_videos, s.zipf_eta);
    auto per_video = viewport_pmfs(s.viewport_dist, s.library, s.seed);
    DemandModel dm = build_demand(s.library, s.users.count(), video_pmf, per_video);

    json j;
    j["video_pmf"] = dm.video_pmf;
    j["Delta"] = dm.Delta;
    json videos = json::array();
    for (int v = 0; v < s.library.num_videos; ++v) {
        json jv;
        jv["video"] = v + 1;
        json vps = json::array();
        for (size_t w = 0; w < dm.per_video[v].viewports.size(); ++w) {
            json e = viewport_to_json(dm.per_video[v].viewports[w]);
            e["p"] = dm.per_video[v].pmf[w];
            vps.push_back(e);
        }
        jv["viewports"] = vps;
        // Heatmap rows: layer-major, row-major tile order.
        json z = json::array();
        for (int l = 0; l < s.library.num_layers; ++l) z.push_back(dm.zbar[v][l]);
        jv["z_per_layer_tile"] = z;
        videos.push_back(jv);
    }
    j["videos"] = videos;
    return j.dump(2) + "\n";
}

std::string policies_to_json(const SchemeResult& result) {
    const ItemSpace& space = result.setup.space;
    json j;
    j["scheme"] = scheme_name(result.scheme);

    json cache = json::array();
    for (size_t n = 0; n < result.solution.cache.cached.size(); ++n) {
        json items = json::array();
        for (int item = 0; item < space.item_count(); ++item) {
            if (!result.solution.cache.cached[n][item]) continue;
            int v = item / (space.G * space.per_vg);
            int g = (item / space.per_vg) % space.G;
            int level = 0, unit = 0;
            space.split_local(item % space.per_vg, &level, &unit);
            items.push_back({{"v", v + 1}, {"g", g + 1}, {"l", level + 1}, {"unit", unit + 1}});
        }
        cache.push_back({{"sbs", n + 1}, {"items", items}});
    }
    j["cache"] = cache;

    json routing = json::array();
    for (size_t u = 0; u < result.solution.routing.source.size(); ++u) {
        json deliveries = json::array();
        for (int item = 0; item < space.item_count(); ++item) {
            int src = result.solution.routing.source[u][item];
            if (src < 0) continue;
            int v = item / (space.G * space.per_vg);
            int g = (item / space.per_vg) % space.G;
            int level = 0, unit = 0;
            space.split_local(item % space.per_vg, &level, &unit);
            deliveries.push_back({{"v", v + 1},
                                  {"g", g + 1},
                                  {"l", level + 1},
                                  {"unit", unit + 1},
                                  {"source", src + 1}});
        }
        routing.push_back({{"user", u + 1}, {"deliveries", deliveries}});
    }
    j["routing"] = routing;
    return j.dump(2) + "\n";
}

ParsedPolicies policies_from_json(const std::string& text, const ItemSpace& space, int num_sbs) {
    json j = json::parse(text);
    ParsedPolicies out;
    out.scheme = scheme_from_name(j.at("scheme").get<std::string>());
    out.cache.cached.assign(num_sbs, std::vector<uint8_t>(space.item_count(), 0));
    out.routing.mbs_code = num_sbs;
    out.routing.source.assign(space.U, std::vector<int8_t>(space.item_count(), -1));

    auto item_index = [&](const json& rec) {
        int v = rec.at("v").get<int>() - 1;
        int g = rec.at("g").get<int>() - 1;
        int level = rec.at("l").get<int>() - 1;
        int unit = rec.at("unit").get<int>() - 1;
        if (v < 0 || v >= space.V || g < 0 || g >= space.G || level < 0 ||
            level >= space.chain_len || unit < 0 || unit >= space.units_per_level[level])
            throw std::invalid_argument("policies: item out of range");
        return space.item_id(v, g, space.local_index(level, unit));
    };

    for (const json& row : j.at("cache")) {
        int n = row.at("sbs").get<int>() - 1;
        if (n < 0 || n >= num_sbs) throw std::invalid_argument("policies: SBS index out of range");
        for (const json& rec : row.at("items")) out.cache.cached[n][item_index(rec)] = 1;
    }
    for (const json& row : j.at("routing")) {
        int u = row.at("user").get<int>() - 1;
        if (u < 0 || u >= space.U) throw std::invalid_argument("policies: user index out of range");
        for (const json& rec : row.at("deliveries")) {
            int item = item_index(rec);
            int src = rec.at("source").get<int>() - 1;
            if (src < 0 || src > num_sbs)
                throw std::invalid_argument("policies: delivery source out of range");
            if (out.routing.source[u][item] >= 0)
                throw std::invalid_argument(
                    "policies: duplicate delivery for one (user, item); tiles are unsplittable");
            out.routing.source[u][item] = static_cast<int8_t>(src);
        }
    }
    return out;
}

std::string metrics_to_json(const SchemeResult& result) {
    json j;
    j["scheme"] = scheme_name(result.scheme);
    j["D"] = result.D;
    j["chr"] = result.chr;
    j["soft_chr"] = result.soft_chr;
    j["gap"] = result.solution.report.max_final_gap();
    j["iterations_total"] = result.solution.report.total_iterations();
    j["iterations_median"] = result.solution.report.median_iterations();
    j["converged"] = result.solution.report.all_converged();
    j["time_s"] = result.solution.report.wall_s;
    json gops = json::array();
    for (const auto& g : result.solution.report.gops)
        gops.push_back({{"gop", g.gop + 1},
                        {"iterations", g.iterations},
                        {"ub", g.ub},
                        {"lb", g.lb},
                        {"gap", g.gap},
                        {"converged", g.converged}});
    j["per_gop"] = gops;
    return j.dump(2) + "\n";
}

std::string violations_to_json(const std::vector<Violation>& violations) {
    json j;
    j["count"] = violations.size();
    json list = json::array();
    for (const auto& v : violations)
        list.push_back({{"constraint", v.constraint}, {"where", v.where}, {"amount", v.amount}});
    j["violations"] = list;
    return j.dump(2) + "\n";
}

std::string trace_to_csv(const SolveReport& report, int gop_index) {
    if (gop_index < 0 || gop_index >= static_cast<int>(report.gops.size()))
        throw std::invalid_argument("trace: GoP index out of range");
    std::string csv = "tau,UB,LB,gap,sigma\n";
    for (const IterRow& row : report.gops[gop_index].trace) {
        csv += std::to_string(row.tau);
        csv += ',';
        csv += fmt_double(row.ub);
        csv += ',';
        csv += fmt_double(row.lb);
        csv += ',';
        csv += fmt_double(row.gap);
        csv += ',';
        csv += fmt_double(row.sigma);
        csv += '\n';
    }
    return csv;
}

}  // namespace tilecache
