#include "itemspace.hpp"

#include <cmath>
#include <stdexcept>

namespace tilecache {

int64_t to_size_units(double mbits) {
    if (mbits < 0.0) throw std::invalid_argument("to_size_units: negative size");
    return static_cast<int64_t>(std::llround(mbits * kUnitsPerMbit));
}

void ItemSpace::split_local(int local, int* level, int* unit) const {
    for (int l = chain_len - 1; l >= 0; --l) {
        if (local >= level_offset[l]) {
            *level = l;
            *unit = local - level_offset[l];
            return;
        }
    }
    throw std::out_of_range("ItemSpace::split_local: bad local index");
}

static void fill_common(ItemSpace& space, const VideoLibrary& lib, const DemandModel& dm) {
    space.V = lib.num_videos;
    space.G = lib.num_gops;
    space.U = dm.num_users;
    space.video_pmf = dm.video_pmf;
    space.per_video = dm.per_video;
    space.grid = lib.grid;
    space.base_layers = lib.num_layers;
    space.level_offset.assign(space.chain_len, 0);
    for (int l = 1; l < space.chain_len; ++l)
        space.level_offset[l] = space.level_offset[l - 1] + space.units_per_level[l - 1];
    space.per_vg = space.level_offset[space.chain_len - 1] + space.units_per_level[space.chain_len - 1];
    size_t total = size_t(space.V) * space.per_vg;
    space.size_mbits.assign(total, 0.0);
    space.size_units.assign(total, 0);
    space.delta.assign(total, 0.0);
    space.zbar.assign(total, 0.0);
}

static void finalize(ItemSpace& space) {
    double per_user_gop = 0.0;
    for (size_t i = 0; i < space.zbar.size(); ++i) {
        space.size_units[i] = to_size_units(space.size_mbits[i]);
        per_user_gop += space.zbar[i] * space.delta[i];
    }
    space.Delta = per_user_gop * space.U * space.G;
}

ItemSpace make_tiled_space(const VideoLibrary& lib, const DemandModel& dm) {
    ItemSpace space;
    space.kind = SpaceKind::Tiled;
    space.chain_len = lib.num_layers;
    space.units_per_level.assign(lib.num_layers, lib.grid.tile_count());
    fill_common(space, lib, dm);

    int T = lib.grid.tile_count();
    for (int v = 0; v < lib.num_videos; ++v) {
        const VideoClass& cls = lib.video_class(v);
        for (int l = 0; l < lib.num_layers; ++l) {
            for (int t = 0; t < T; ++t) {
                size_t i = space.vlocal(v, space.local_index(l, t));
                space.size_mbits[i] = cls.size_per_tile[l];
                space.delta[i] = cls.delta_per_tile[l];
                space.zbar[i] = dm.zbar[v][l][t];
            }
        }
    }
    finalize(space);
    return space;
}

ItemSpace make_versioned_space(const VideoLibrary& lib, const DemandModel& dm) {
    ItemSpace space;
    space.kind = SpaceKind::Versioned;
    space.chain_len = 1;
    int W = static_cast<int>(dm.per_video.empty() ? 0 : dm.per_video[0].viewports.size());
    for (const auto& dist : dm.per_video)
        if (static_cast<int>(dist.viewports.size()) != W)
            throw std::invalid_argument("versioned space: viewport set size must match across videos");
    space.units_per_level = {W};
    fill_common(space, lib, dm);

    int T = lib.grid.tile_count();
    for (int v = 0; v < lib.num_videos; ++v) {
        const VideoClass& cls = lib.video_class(v);
        const auto& dist = dm.per_video[v];
        for (int w = 0; w < W; ++w) {
            size_t i = space.vlocal(v, space.local_index(0, w));
            int vp_tiles = static_cast<int>(dist.viewports[w].tiles.size());
            double size = T * cls.size_per_tile[0];
            double delta = T * cls.delta_per_tile[0];
            for (int l = 1; l < lib.num_layers; ++l) {
                size += vp_tiles * cls.size_per_tile[l];
                delta += vp_tiles * cls.delta_per_tile[l];
            }
            space.size_mbits[i] = size;
            space.delta[i] = delta;
            space.zbar[i] = dm.video_pmf[v] * dist.pmf[w];
        }
    }
    finalize(space);
    return space;
}

ItemSpace make_layered_space(const VideoLibrary& lib, const DemandModel& dm) {
    ItemSpace space;
    space.kind = SpaceKind::Layered;
    space.has_root = true;
    space.chain_len = lib.num_layers;
    int W = static_cast<int>(dm.per_video.empty() ? 0 : dm.per_video[0].viewports.size());
    for (const auto& dist : dm.per_video)
        if (static_cast<int>(dist.viewports.size()) != W)
            throw std::invalid_argument("layered space: viewport set size must match across videos");
    space.units_per_level.assign(lib.num_layers, W);
    space.units_per_level[0] = 1;
    fill_common(space, lib, dm);

    int T = lib.grid.tile_count();
    for (int v = 0; v < lib.num_videos; ++v) {
        const VideoClass& cls = lib.video_class(v);
        const auto& dist = dm.per_video[v];
        size_t base = space.vlocal(v, space.local_index(0, 0));
        space.size_mbits[base] = T * cls.size_per_tile[0];
        space.delta[base] = T * cls.delta_per_tile[0];
        space.zbar[base] = dm.video_pmf[v];
        for (int l = 1; l < lib.num_layers; ++l) {
            for (int w = 0; w < W; ++w) {
                size_t i = space.vlocal(v, space.local_index(l, w));
                int vp_tiles = static_cast<int>(dist.viewports[w].tiles.size());
                space.size_mbits[i] = vp_tiles * cls.size_per_tile[l];
                space.delta[i] = vp_tiles * cls.delta_per_tile[l];
                space.zbar[i] = dm.video_pmf[v] * dist.pmf[w];
            }
        }
    }
    finalize(space);
    return space;
}

ItemTiles item_tiles(const ItemSpace& space, int v, int local) {
    ItemTiles out;
    int level = 0, unit = 0;
    space.split_local(local, &level, &unit);
    int T = space.grid.tile_count();
    switch (space.kind) {
        case SpaceKind::Tiled:
            if (level == 0) {
                out.base_tiles = {unit};
            } else {
                out.enh_tiles = {unit};
                out.enh_levels = 1;
            }
            break;
        case SpaceKind::Versioned: {
            for (int t = 0; t < T; ++t) out.base_tiles.push_back(t);
            out.enh_tiles = space.per_video[v].viewports[unit].tiles;
            out.enh_levels = space.base_layers - 1;
            break;
        }
        case SpaceKind::Layered:
            if (level == 0) {
                for (int t = 0; t < T; ++t) out.base_tiles.push_back(t);
            } else {
                out.enh_tiles = space.per_video[v].viewports[unit].tiles;
                out.enh_levels = 1;
            }
            break;
    }
    return out;
}

}  // namespace tilecache
