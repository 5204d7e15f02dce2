// Domain model: tiled/layered video library, network geometry, user association.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace tilecache {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Spatial tiling of one 360-degree frame. Tiles are indexed 0..T-1 row-major
// internally; the serialized form uses 1-based indices.
struct TileGrid {
    int rows = 3;
    int cols = 4;
    int tile_count() const { return rows * cols; }
    int tile_at(int row, int col) const { return row * cols + col; }
};

// A viewport is the set of tiles a user actually watches (default 2x2 block).
struct Viewport {
    int id = 0;
    std::vector<int> tiles;  // 0-based tile indices, ascending
};

// Per-layer size (Mbits) and distortion-reduction constants of a content class.
struct VideoClass {
    std::string name;
    std::vector<double> size_per_tile;   // o_l, one per layer
    std::vector<double> delta_per_tile;  // delta_l, one per layer
};

struct VideoLibrary {
    int num_videos = 0;
    int num_gops = 0;
    int num_layers = 0;
    TileGrid grid;
    int viewport_rows = 2;
    int viewport_cols = 2;
    std::vector<VideoClass> classes;
    std::vector<int> class_of;        // video -> class index
    std::vector<Viewport> viewports;  // candidate viewports (default: all in-bounds blocks)

    const VideoClass& video_class(int v) const { return classes[class_of[v]]; }
    void validate() const;  // throws std::invalid_argument naming the bad field
    double total_size_mbits() const;
};

// Identity of one cacheable/deliverable chunk. All indices 0-based.
struct ItemKey {
    int v = 0;
    int g = 0;
    int l = 0;
    int t = 0;
};

double item_size(const VideoLibrary& lib, const ItemKey& key);   // Mbits
double item_delta(const VideoLibrary& lib, const ItemKey& key);  // distortion units

struct Network {
    std::vector<Vec2> sbs_pos;
    std::vector<double> sbs_radius;          // meters
    Vec2 mbs_pos;
    double mbs_radius = 0.0;                 // meters
    std::vector<double> cache_capacity_mbits;
    // Transmission delays in seconds per Mbit. sbs_delay is user-major.
    std::vector<std::vector<double>> sbs_delay;  // [u][n]
    std::vector<double> backhaul_delay;          // [u]

    int num_sbs() const { return static_cast<int>(sbs_pos.size()); }
    void validate(int num_users) const;
};

struct UserPopulation {
    std::vector<Vec2> pos;
    int count() const { return static_cast<int>(pos.size()); }
};

// Binary user-to-SBS coverage. The MBS column is implicit: it is always 1.
class AssociationMatrix {
public:
    AssociationMatrix() = default;
    AssociationMatrix(int users, int sbs) : users_(users), sbs_(sbs), bits_(size_t(users) * sbs, 0) {}

    bool covered(int u, int n) const { return bits_[size_t(u) * sbs_ + n] != 0; }
    void set(int u, int n, bool value) { bits_[size_t(u) * sbs_ + n] = value ? 1 : 0; }
    int user_count() const { return users_; }
    int sbs_count() const { return sbs_; }

    std::vector<int> covering_sbs(int u) const {
        std::vector<int> out;
        for (int n = 0; n < sbs_; ++n)
            if (covered(u, n)) out.push_back(n);
        return out;
    }

private:
    int users_ = 0;
    int sbs_ = 0;
    std::vector<uint8_t> bits_;
};

AssociationMatrix build_association(const Network& net, const UserPopulation& users);

// Keeps, per user, only the geometrically nearest covering SBS (distance is the
// max-SINR proxy). Ties break to the lowest SBS index. Users covered by no SBS
// keep zero SBS columns and are served by the MBS only.
AssociationMatrix restrict_to_nearest(const AssociationMatrix& assoc, const Network& net,
                                      const UserPopulation& users);

enum class ViewportDist { BiGauss, Uniform, Selective };

const char* viewport_dist_name(ViewportDist d);
ViewportDist viewport_dist_from_name(const std::string& name);

struct SolverParams {
    double w = 1.0;         // initial subgradient step scale, in (0, 2]
    double epsilon = 0.01;  // relative duality-gap target
    int tau_max = 1000;
    double lambda0 = 0.2;
    bool paper_subgradient = false;  // use the printed subgradient formula instead of alpha*x - y
    // Halve the step scale whenever the dual bound fails to improve for this
    // many iterations; 0 keeps the scale fixed.
    int stall_window = 30;
    // Give up early when neither bound has improved for this many iterations
    // (the multipliers have stopped producing progress); 0 disables.
    int no_progress_window = 150;
    void validate() const;
};

struct Scenario {
    VideoLibrary library;
    Network network;
    UserPopulation users;
    AssociationMatrix association;
    ViewportDist viewport_dist = ViewportDist::BiGauss;
    double zipf_eta = 1.0;
    double t_app_s = 1.0;
    double t_disp_s = 1.0;
    uint64_t seed = 1;
    SolverParams solver;

    void validate() const;
};

// All 2x2 (or viewport_rows x viewport_cols) blocks fully inside the grid,
// row-major anchor order. On the default 3x4 grid this yields the six
// overlapping viewports that concentrate popularity on the central tiles.
std::vector<Viewport> default_viewports(const TileGrid& grid, int vp_rows, int vp_cols);

// Every grid cell as an anchor, folding around both horizontally and
// vertically: rows*cols viewports covering each tile the same number of times.
std::vector<Viewport> wraparound_viewports(const TileGrid& grid, int vp_rows, int vp_cols);

// The three reference content classes (per-tile per-layer size and distortion
// reduction for the Hog Rider / Roller Coaster / Chariot Race sequences).
std::vector<VideoClass> reference_classes();

// Deterministic 40/30/30 class mix by video index.
std::vector<int> default_class_mix(int num_videos);

}  // namespace tilecache
