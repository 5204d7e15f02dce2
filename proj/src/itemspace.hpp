// Unified item universe consumed by the solver stack. The tile-and-layer
// scheme, the single-tile version schemes and the layered scheme all reduce to
// the same structure: per (video, GoP) a set of units, each carrying a chain
// of quality levels, with sizes, distortion reductions and request
// probabilities attached.
#pragma once

#include <cstdint>
#include <vector>

#include "demand.hpp"
#include "model.hpp"

namespace tilecache {

enum class SpaceKind {
    Tiled,      // unit = tile, chain = quality layers
    Versioned,  // unit = viewport version, single level
    Layered     // unit 0 = whole-frame base, other units = per-viewport
                // enhancement chains that additionally require the base
};

// Item sizes are quantized to integer kilobit units before any knapsack or
// capacity arithmetic; the reference constants are exact at this granularity.
constexpr double kUnitsPerMbit = 1000.0;

int64_t to_size_units(double mbits);

struct ItemSpace {
    SpaceKind kind = SpaceKind::Tiled;
    int V = 0;
    int G = 0;
    int U = 0;
    int chain_len = 1;                  // levels per unit chain
    std::vector<int> units_per_level;   // size chain_len
    std::vector<int> level_offset;      // prefix sums into the per-(v,g) block
    int per_vg = 0;                     // items per (video, GoP)

    // Flat per-(v, local) tables; identical across GoPs and users.
    std::vector<double> size_mbits;   // [V * per_vg]
    std::vector<int64_t> size_units;  // [V * per_vg]
    std::vector<double> delta;        // [V * per_vg]
    std::vector<double> zbar;         // [V * per_vg]
    double Delta = 0.0;

    std::vector<double> video_pmf;
    std::vector<ViewportDistribution> per_video;  // effective viewport sets
    TileGrid grid;
    int base_layers = 1;  // quality layers of the underlying encoding

    // Layered spaces only: whether the chain of a unit requires the shared
    // whole-frame base unit to be delivered first.
    bool has_root = false;

    int local_index(int level, int unit) const { return level_offset[level] + unit; }
    int vlocal(int v, int local) const { return v * per_vg + local; }
    int item_id(int v, int g, int local) const { return (v * G + g) * per_vg + local; }
    int item_count() const { return V * G * per_vg; }
    int vlocal_count() const { return V * per_vg; }

    // Decompose a per-(v,g)-local index back into (level, unit).
    void split_local(int local, int* level, int* unit) const;

    double coef_z(int v, int local) const { return zbar[size_t(vlocal(v, local))]; }
};

// Tile-and-layer space for the proposed scheme and IC.
ItemSpace make_tiled_space(const VideoLibrary& lib, const DemandModel& dm);

// Single-tile version space (ICNT/JCNT): one item per (video, GoP, viewport)
// bundling the whole scene at base quality with one viewport at full quality.
ItemSpace make_versioned_space(const VideoLibrary& lib, const DemandModel& dm);

// Layered space (JCL): a whole-frame base item per (video, GoP) plus
// per-viewport enhancement items that require the base.
ItemSpace make_layered_space(const VideoLibrary& lib, const DemandModel& dm);

// Delivered tile counts of one item, used by the realized-request metrics.
// base_tiles: tiles recovered at base quality; enh levels counted separately.
struct ItemTiles {
    std::vector<int> base_tiles;
    std::vector<int> enh_tiles;  // tiles at one enhancement level
    int enh_levels = 0;          // how many enhancement levels this item carries
};
ItemTiles item_tiles(const ItemSpace& space, int v, int local);

}  // namespace tilecache
