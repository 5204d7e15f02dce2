#include "demand.hpp"

#include <cmath>
#include <stdexcept>

#include "util.hpp"

namespace tilecache {

std::vector<double> zipf_pmf(int num_videos, double eta) {
    if (num_videos < 1) throw std::invalid_argument("zipf_pmf: need at least one video");
    if (eta < 0.0) throw std::invalid_argument("zipf_pmf: eta must be >= 0");
    std::vector<double> pmf(num_videos);
    double norm = 0.0;
    for (int v = 0; v < num_videos; ++v) {
        pmf[v] = 1.0 / std::pow(static_cast<double>(v + 1), eta);
        norm += pmf[v];
    }
    for (double& p : pmf) p /= norm;
    return pmf;
}

ViewportDistribution viewport_pmf(ViewportDist kind, const VideoLibrary& lib, int video,
                                  uint64_t seed) {
    if (video < 0 || video >= lib.num_videos)
        throw std::out_of_range("viewport_pmf: video index out of range");
    ViewportDistribution out;
    switch (kind) {
        case ViewportDist::BiGauss: {
            out.viewports = lib.viewports;
            out.pmf.assign(out.viewports.size(), 1.0 / out.viewports.size());
            break;
        }
        case ViewportDist::Uniform: {
            out.viewports = wraparound_viewports(lib.grid, lib.viewport_rows, lib.viewport_cols);
            out.pmf.assign(out.viewports.size(), 1.0 / out.viewports.size());
            break;
        }
        case ViewportDist::Selective: {
            if (lib.viewports.empty())
                throw std::invalid_argument("viewport_pmf: selective needs a nonempty viewport list");
            out.viewports = lib.viewports;
            out.pmf.assign(out.viewports.size(), 0.0);
            Rng rng(substream(seed, 0x5e1ec71fULL + static_cast<uint64_t>(video)));
            out.pmf[rng.uniform_int(static_cast<int>(out.viewports.size()))] = 1.0;
            break;
        }
    }
    return out;
}

std::vector<ViewportDistribution> viewport_pmfs(ViewportDist kind, const VideoLibrary& lib,
                                                uint64_t seed) {
    std::vector<ViewportDistribution> out;
    out.reserve(lib.num_videos);
    for (int v = 0; v < lib.num_videos; ++v) out.push_back(viewport_pmf(kind, lib, v, seed));
    return out;
}

DemandModel build_demand(const VideoLibrary& lib, int num_users,
                         const std::vector<double>& video_pmf,
                         const std::vector<ViewportDistribution>& per_video) {
    if (static_cast<int>(video_pmf.size()) != lib.num_videos)
        throw std::invalid_argument("build_demand: video pmf size mismatch");
    if (static_cast<int>(per_video.size()) != lib.num_videos)
        throw std::invalid_argument("build_demand: viewport distribution per video required");

    DemandModel dm;
    dm.video_pmf = video_pmf;
    dm.per_video = per_video;
    dm.num_users = num_users;

    int T = lib.grid.tile_count();
    int L = lib.num_layers;
    dm.zbar.assign(lib.num_videos, std::vector<std::vector<double>>(L, std::vector<double>(T, 0.0)));

    double per_user_gop = 0.0;
    for (int v = 0; v < lib.num_videos; ++v) {
        const auto& dist = per_video[v];
        // Probability that tile t belongs to the requested viewport.
        std::vector<double> tile_mass(T, 0.0);
        for (size_t w = 0; w < dist.viewports.size(); ++w)
            for (int t : dist.viewports[w].tiles) tile_mass[t] += dist.pmf[w];

        const VideoClass& cls = lib.video_class(v);
        for (int t = 0; t < T; ++t) {
            dm.zbar[v][0][t] = video_pmf[v];
            per_user_gop += dm.zbar[v][0][t] * cls.delta_per_tile[0];
            for (int l = 1; l < L; ++l) {
                dm.zbar[v][l][t] = video_pmf[v] * tile_mass[t];
                per_user_gop += dm.zbar[v][l][t] * cls.delta_per_tile[l];
            }
        }
    }
    dm.Delta = per_user_gop * num_users * lib.num_gops;
    return dm;
}

}  // namespace tilecache
