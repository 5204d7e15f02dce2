// Request-probability model: video popularity (Zipf) times viewport popularity
// gives the per-item request probability z and the normalizer Delta.
#pragma once

#include <vector>

#include "model.hpp"

namespace tilecache {

// Zipf pmf with shape eta over ranks 1..V: p_v proportional to 1/v^eta.
std::vector<double> zipf_pmf(int num_videos, double eta);

// One video's effective viewport set together with its request pmf.
struct ViewportDistribution {
    std::vector<Viewport> viewports;
    std::vector<double> pmf;
};

// BiGauss: uniform over the library's configured viewports (the default six
// overlapping blocks, which makes central tiles the most popular).
// Uniform: uniform over all rows*cols fold-around anchors, which makes every
// tile equally popular.
// Selective: unit mass on one seeded-random viewport from the library set,
// drawn independently per video.
ViewportDistribution viewport_pmf(ViewportDist kind, const VideoLibrary& lib, int video,
                                  uint64_t seed);

std::vector<ViewportDistribution> viewport_pmfs(ViewportDist kind, const VideoLibrary& lib,
                                                uint64_t seed);

struct DemandModel {
    std::vector<double> video_pmf;                    // V entries
    std::vector<ViewportDistribution> per_video;      // V entries
    // z factors indexed [v][l][t]; identical across users and GoPs.
    std::vector<std::vector<std::vector<double>>> zbar;
    double Delta = 0.0;                               // over all (u, v, g, l, t)
    int num_users = 0;

    double z(int u, const ItemKey& key) const {
        (void)u;
        return zbar[key.v][key.l][key.t];
    }
};

// A request for (v, w) asks for every tile at the base layer and the viewport
// tiles at every enhancement layer, so z(v,g,1,t) = p_v and
// z(v,g,l>=2,t) = p_v * sum of pmf over viewports containing t.
DemandModel build_demand(const VideoLibrary& lib, int num_users,
                         const std::vector<double>& video_pmf,
                         const std::vector<ViewportDistribution>& per_video);

}  // namespace tilecache
