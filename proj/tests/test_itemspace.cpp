#include <doctest.h>

#include "itemspace.hpp"

using namespace tilecache;

namespace {

struct Fixture {
    VideoLibrary lib;
    DemandModel dm;

    explicit Fixture(ViewportDist dist = ViewportDist::BiGauss, int videos = 3) {
        lib.num_videos = videos;
        lib.num_gops = 2;
        lib.num_layers = 2;
        lib.grid = {3, 4};
        lib.classes = reference_classes();
        lib.class_of = default_class_mix(videos);
        lib.viewports = default_viewports(lib.grid, 2, 2);
        dm = build_demand(lib, 4, zipf_pmf(videos, 1.0), viewport_pmfs(dist, lib, 5));
    }
};

}  // namespace

TEST_CASE("tiled space mirrors the library") {
    Fixture f;
    ItemSpace space = make_tiled_space(f.lib, f.dm);
    CHECK(space.per_vg == 24);
    CHECK(space.item_count() == 3 * 2 * 24);
    CHECK(space.size_mbits[space.vlocal(0, space.local_index(0, 0))] == doctest::Approx(0.010));
    CHECK(space.size_units[space.vlocal(0, space.local_index(1, 0))] == 125);
    CHECK(space.Delta == doctest::Approx(f.dm.Delta));
}

TEST_CASE("versioned items aggregate the tile-level sizes and deltas") {
    Fixture f;
    ItemSpace space = make_versioned_space(f.lib, f.dm);
    CHECK(space.chain_len == 1);
    CHECK(space.units_per_level[0] == 6);

    // Hog Rider version: whole scene at base plus a 2x2 viewport enhanced.
    size_t i = space.vlocal(0, space.local_index(0, 0));
    CHECK(space.size_mbits[i] == doctest::Approx(12 * 0.010 + 4 * 0.125));
    CHECK(space.size_mbits[i] == doctest::Approx(0.620));
    CHECK(space.delta[i] == doctest::Approx(12 * 118.0 + 4 * 125.0));
    CHECK(space.delta[i] == doctest::Approx(1916.0));
    CHECK(space.zbar[i] == doctest::Approx(f.dm.video_pmf[0] / 6.0));
}

TEST_CASE("layered items split the whole-frame base from per-viewport enhancements") {
    Fixture f;
    ItemSpace space = make_layered_space(f.lib, f.dm);
    CHECK(space.has_root);
    CHECK(space.units_per_level[0] == 1);
    CHECK(space.units_per_level[1] == 6);

    // Roller Coaster base item (video 2 of the 40/30/30 mix over 3 videos).
    size_t base = space.vlocal(1, space.local_index(0, 0));
    CHECK(space.size_mbits[base] == doctest::Approx(12 * 0.208));
    CHECK(space.size_mbits[base] == doctest::Approx(2.496));
    size_t enh = space.vlocal(1, space.local_index(1, 2));
    CHECK(space.size_mbits[enh] == doctest::Approx(4 * 0.167));
    CHECK(space.delta[enh] == doctest::Approx(4 * 298.0));
}

TEST_CASE("granularity coarsening conserves the normalizer") {
    for (ViewportDist dist :
         {ViewportDist::BiGauss, ViewportDist::Uniform, ViewportDist::Selective}) {
        Fixture f(dist);
        ItemSpace tiled = make_tiled_space(f.lib, f.dm);
        ItemSpace versioned = make_versioned_space(f.lib, f.dm);
        ItemSpace layered = make_layered_space(f.lib, f.dm);
        CHECK(versioned.Delta == doctest::Approx(tiled.Delta).epsilon(1e-9));
        CHECK(layered.Delta == doctest::Approx(tiled.Delta).epsilon(1e-9));
    }
}

TEST_CASE("item tiles expansion") {
    Fixture f;
    ItemSpace versioned = make_versioned_space(f.lib, f.dm);
    ItemTiles tiles = item_tiles(versioned, 0, versioned.local_index(0, 1));
    CHECK(tiles.base_tiles.size() == 12);
    CHECK(tiles.enh_tiles == f.lib.viewports[1].tiles);
    CHECK(tiles.enh_levels == 1);

    ItemSpace tiled = make_tiled_space(f.lib, f.dm);
    ItemTiles one = item_tiles(tiled, 0, tiled.local_index(1, 7));
    CHECK(one.base_tiles.empty());
    CHECK(one.enh_tiles == std::vector<int>{7});
}
