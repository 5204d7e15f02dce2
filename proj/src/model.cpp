#include "model.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace tilecache {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

void VideoLibrary::validate() const {
    require(grid.rows >= 1 && grid.cols >= 1, "library.grid: rows and cols must be >= 1");
    require(num_videos >= 0, "library.num_videos: must be >= 0");
    require(num_gops >= 1, "library.num_gops: must be >= 1");
    require(num_layers >= 1, "library.num_layers: must be >= 1");
    require(viewport_rows >= 1 && viewport_rows <= grid.rows,
            "library.viewport_rows: must be in [1, grid.rows]");
    require(viewport_cols >= 1 && viewport_cols <= grid.cols,
            "library.viewport_cols: must be in [1, grid.cols]");
    require(static_cast<int>(class_of.size()) == num_videos,
            "library.class_of: one class per video required");
    for (int v = 0; v < num_videos; ++v)
        require(class_of[v] >= 0 && class_of[v] < static_cast<int>(classes.size()),
                "library.class_of: class index out of range");
    for (const auto& c : classes) {
        require(static_cast<int>(c.size_per_tile.size()) == num_layers,
                "library.classes: size_per_tile needs one entry per layer");
        require(static_cast<int>(c.delta_per_tile.size()) == num_layers,
                "library.classes: delta_per_tile needs one entry per layer");
        for (double s : c.size_per_tile) require(s > 0.0, "library.classes: tile sizes must be > 0");
        for (double d : c.delta_per_tile) require(d >= 0.0, "library.classes: deltas must be >= 0");
    }
    require(!viewports.empty(), "library.viewports: must not be empty");
    int T = grid.tile_count();
    for (const auto& w : viewports) {
        require(!w.tiles.empty(), "library.viewports: viewport with no tiles");
        for (int t : w.tiles) require(t >= 0 && t < T, "library.viewports: tile index out of grid");
    }
}

double VideoLibrary::total_size_mbits() const {
    double per_tile_sum = 0.0;
    for (int v = 0; v < num_videos; ++v) {
        const VideoClass& c = video_class(v);
        for (double s : c.size_per_tile) per_tile_sum += s;
    }
    return per_tile_sum * num_gops * grid.tile_count();
}

static void check_key(const VideoLibrary& lib, const ItemKey& key) {
    if (key.v < 0 || key.v >= lib.num_videos || key.g < 0 || key.g >= lib.num_gops ||
        key.l < 0 || key.l >= lib.num_layers || key.t < 0 || key.t >= lib.grid.tile_count())
        throw std::out_of_range("item key out of library bounds");
}

double item_size(const VideoLibrary& lib, const ItemKey& key) {
    check_key(lib, key);
    return lib.video_class(key.v).size_per_tile[key.l];
}

double item_delta(const VideoLibrary& lib, const ItemKey& key) {
    check_key(lib, key);
    return lib.video_class(key.v).delta_per_tile[key.l];
}

void Network::validate(int num_users) const {
    int N = num_sbs();
    require(static_cast<int>(sbs_radius.size()) == N, "network.sbs_radius: one radius per SBS");
    require(static_cast<int>(cache_capacity_mbits.size()) == N,
            "network.cache_capacity_mbits: one capacity per SBS");
    for (double r : sbs_radius) require(r >= 0.0 && std::isfinite(r), "network.sbs_radius: must be finite and >= 0");
    require(mbs_radius >= 0.0 && std::isfinite(mbs_radius), "network.mbs_radius: must be finite and >= 0");
    for (double c : cache_capacity_mbits) require(c >= 0.0, "network.cache_capacity_mbits: must be >= 0");
    require(static_cast<int>(sbs_delay.size()) == num_users, "network.sbs_delay: one row per user");
    require(static_cast<int>(backhaul_delay.size()) == num_users,
            "network.backhaul_delay: one entry per user");
    for (int u = 0; u < num_users; ++u) {
        require(static_cast<int>(sbs_delay[u].size()) == N, "network.sbs_delay: one column per SBS");
        for (int n = 0; n < N; ++n) {
            require(sbs_delay[u][n] > 0.0, "network.sbs_delay: must be > 0");
            require(backhaul_delay[u] > sbs_delay[u][n],
                    "network.backhaul_delay: must exceed every SBS delay");
        }
        require(backhaul_delay[u] > 0.0, "network.backhaul_delay: must be > 0");
    }
}

AssociationMatrix build_association(const Network& net, const UserPopulation& users) {
    int U = users.count();
    int N = net.num_sbs();
    AssociationMatrix alpha(U, N);
    for (int u = 0; u < U; ++u)
        for (int n = 0; n < N; ++n)
            alpha.set(u, n, distance(users.pos[u], net.sbs_pos[n]) <= net.sbs_radius[n]);
    return alpha;
}

AssociationMatrix restrict_to_nearest(const AssociationMatrix& assoc, const Network& net,
                                      const UserPopulation& users) {
    int U = assoc.user_count();
    int N = assoc.sbs_count();
    AssociationMatrix out(U, N);
    for (int u = 0; u < U; ++u) {
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (int n = 0; n < N; ++n) {
            if (!assoc.covered(u, n)) continue;
            double d = distance(users.pos[u], net.sbs_pos[n]);
            if (d < best_dist) {
                best_dist = d;
                best = n;
            }
        }
        if (best >= 0) out.set(u, best, true);
    }
    return out;
}

const char* viewport_dist_name(ViewportDist d) {
    switch (d) {
        case ViewportDist::BiGauss: return "bigauss";
        case ViewportDist::Uniform: return "uniform";
        case ViewportDist::Selective: return "selective";
    }
    return "bigauss";
}

ViewportDist viewport_dist_from_name(const std::string& name) {
    if (name == "bigauss") return ViewportDist::BiGauss;
    if (name == "uniform") return ViewportDist::Uniform;
    if (name == "selective") return ViewportDist::Selective;
    throw std::invalid_argument("unknown viewport distribution '" + name +
                                "' (expected bigauss, uniform or selective)");
}

void SolverParams::validate() const {
    require(w > 0.0 && w <= 2.0, "solver.w: must be in (0, 2]");
    require(epsilon > 0.0, "solver.epsilon: must be > 0");
    require(tau_max >= 1, "solver.tau_max: must be >= 1");
    require(lambda0 >= 0.0, "solver.lambda0: must be >= 0");
    require(stall_window >= 0, "solver.stall_window: must be >= 0");
    require(no_progress_window >= 0, "solver.no_progress_window: must be >= 0");
}

void Scenario::validate() const {
    library.validate();
    network.validate(users.count());
    solver.validate();
    require(zipf_eta >= 0.0, "demand.zipf_eta: must be >= 0");
    require(t_app_s >= 0.0, "timing.t_app_s: must be >= 0");
    require(t_disp_s >= 0.0, "timing.t_disp_s: must be >= 0");
    require(association.user_count() == users.count() &&
                association.sbs_count() == network.num_sbs(),
            "association: dimensions do not match users/network");
    for (int u = 0; u < users.count(); ++u)
        require(distance(users.pos[u], network.mbs_pos) <= network.mbs_radius,
                "users: every user must be inside the MBS radius");
}

static Viewport block_viewport(const TileGrid& grid, int id, int anchor_row, int anchor_col,
                               int vp_rows, int vp_cols, bool wrap) {
    Viewport w;
    w.id = id;
    for (int dr = 0; dr < vp_rows; ++dr) {
        for (int dc = 0; dc < vp_cols; ++dc) {
            int row = anchor_row + dr;
            int col = anchor_col + dc;
            if (wrap) {
                row %= grid.rows;
                col %= grid.cols;
            }
            w.tiles.push_back(grid.tile_at(row, col));
        }
    }
    std::sort(w.tiles.begin(), w.tiles.end());
    w.tiles.erase(std::unique(w.tiles.begin(), w.tiles.end()), w.tiles.end());
    return w;
}

std::vector<Viewport> default_viewports(const TileGrid& grid, int vp_rows, int vp_cols) {
    std::vector<Viewport> out;
    int id = 0;
    for (int r = 0; r + vp_rows <= grid.rows; ++r)
        for (int c = 0; c + vp_cols <= grid.cols; ++c)
            out.push_back(block_viewport(grid, id++, r, c, vp_rows, vp_cols, false));
    return out;
}

std::vector<Viewport> wraparound_viewports(const TileGrid& grid, int vp_rows, int vp_cols) {
    std::vector<Viewport> out;
    int id = 0;
    for (int r = 0; r < grid.rows; ++r)
        for (int c = 0; c < grid.cols; ++c)
            out.push_back(block_viewport(grid, id++, r, c, vp_rows, vp_cols, true));
    return out;
}

std::vector<VideoClass> reference_classes() {
    return {
        {"HogRider", {0.010, 0.125}, {118.0, 125.0}},
        {"RollerCoaster", {0.208, 0.167}, {292.0, 298.0}},
        {"ChariotRace", {0.029, 0.275}, {187.0, 192.0}},
    };
}

std::vector<int> default_class_mix(int num_videos) {
    std::vector<int> out(num_videos, 0);
    for (int v = 0; v < num_videos; ++v) {
        double frac = (v + 1.0) / num_videos;
        if (frac <= 0.4 + 1e-12)
            out[v] = 0;
        else if (frac <= 0.7 + 1e-12)
            out[v] = 1;
        else
            out[v] = 2;
    }
    return out;
}

}  // namespace tilecache
