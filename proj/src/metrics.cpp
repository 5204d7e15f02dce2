#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "util.hpp"

namespace tilecache {

namespace {

int overlap_count(const std::vector<int>& a, const std::vector<int>& b) {
    int count = 0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++count;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return count;
}

}  // namespace

double distortion_reduction(const ItemSpace& space, const AssociationMatrix& assoc,
                            const RoutingPolicy& routing) {
    if (space.Delta <= 0.0)
        throw std::invalid_argument("distortion_reduction: degenerate demand (Delta is zero)");
    int N = assoc.sbs_count();
    double value = 0.0;
    for (int u = 0; u < space.U; ++u) {
        for (int item = 0; item < space.item_count(); ++item) {
            int src = routing.source[u][item];
            if (src < 0) continue;
            int v = item / (space.G * space.per_vg);
            int local = item % space.per_vg;
            size_t vl = size_t(v) * space.per_vg + local;
            double alpha = (src == N) ? 1.0 : (assoc.covered(u, src) ? 1.0 : 0.0);
            value += space.zbar[vl] * space.delta[vl] * alpha;
        }
    }
    return value / space.Delta;
}

double cache_hit_ratio(const ItemSpace& space, const RoutingPolicy& routing) {
    double hit = 0.0;
    double total = 0.0;
    for (int u = 0; u < space.U; ++u) {
        for (int item = 0; item < space.item_count(); ++item) {
            int v = item / (space.G * space.per_vg);
            int local = item % space.per_vg;
            size_t vl = size_t(v) * space.per_vg + local;
            double z = space.zbar[vl];
            if (z <= 0.0) continue;
            total += z;
            int src = routing.source[u][item];
            if (src >= 0 && src != routing.mbs_code) hit += z;
        }
    }
    if (total <= 0.0) throw std::invalid_argument("cache_hit_ratio: zero total demand");
    return hit / total;
}

double soft_chr_from_counts(int64_t nd_base, int64_t nd_enh, int64_t nr_base, int64_t nr_enh) {
    int64_t requested = nr_base + nr_enh;
    if (requested <= 0) throw std::invalid_argument("soft_chr: zero requested tiles");
    return static_cast<double>(nd_base + nd_enh) / static_cast<double>(requested);
}

double soft_cache_hit_ratio(const ItemSpace& space, const RoutingPolicy& routing, uint64_t seed,
                            int realizations) {
    if (realizations <= 0) throw std::invalid_argument("soft_cache_hit_ratio: need realizations");
    if (space.U == 0) throw std::invalid_argument("soft_cache_hit_ratio: no users");
    int T = space.grid.tile_count();
    int enh_levels = space.base_layers - 1;
    int mbs = routing.mbs_code;

    auto from_sbs = [&](int u, int v, int g, int level, int unit) {
        int src = routing.source[u][space.item_id(v, g, space.local_index(level, unit))];
        return src >= 0 && src != mbs;
    };

    double acc = 0.0;
    for (int r = 0; r < realizations; ++r) {
        Rng rng(substream(seed, 0x50f7c4a1ULL + static_cast<uint64_t>(r)));
        int64_t nd_b = 0, nd_e = 0, nr_b = 0, nr_e = 0;
        for (int u = 0; u < space.U; ++u) {
            int v = rng.sample_pmf(space.video_pmf);
            const auto& dist = space.per_video[v];
            int w = rng.sample_pmf(dist.pmf);
            const auto& wtiles = dist.viewports[w].tiles;
            for (int g = 0; g < space.G; ++g) {
                nr_b += T;
                nr_e += static_cast<int64_t>(wtiles.size()) * enh_levels;
                switch (space.kind) {
                    case SpaceKind::Tiled: {
                        for (int t = 0; t < T; ++t)
                            if (from_sbs(u, v, g, 0, t)) ++nd_b;
                        for (int l = 1; l < space.chain_len; ++l)
                            for (int t : wtiles)
                                if (from_sbs(u, v, g, l, t)) ++nd_e;
                        break;
                    }
                    case SpaceKind::Versioned: {
                        if (from_sbs(u, v, g, 0, w)) {
                            nd_b += T;
                            nd_e += static_cast<int64_t>(wtiles.size()) * enh_levels;
                        } else {
                            int best_overlap = 0, best_unit = -1;
                            for (int w2 = 0; w2 < space.units_per_level[0]; ++w2) {
                                if (w2 == w || !from_sbs(u, v, g, 0, w2)) continue;
                                int ov = overlap_count(wtiles, dist.viewports[w2].tiles);
                                if (ov > best_overlap) {
                                    best_overlap = ov;
                                    best_unit = w2;
                                }
                            }
                            if (best_unit >= 0) {
                                nd_b += T;
                                nd_e += static_cast<int64_t>(best_overlap) * enh_levels;
                            }
                        }
                        break;
                    }
                    case SpaceKind::Layered: {
                        if (from_sbs(u, v, g, 0, 0)) nd_b += T;
                        for (int l = 1; l < space.chain_len; ++l) {
                            if (from_sbs(u, v, g, l, w)) {
                                nd_e += static_cast<int64_t>(wtiles.size());
                            } else {
                                int best_overlap = 0;
                                for (int w2 = 0; w2 < space.units_per_level[l]; ++w2) {
                                    if (w2 == w || !from_sbs(u, v, g, l, w2)) continue;
                                    int ov = overlap_count(wtiles, dist.viewports[w2].tiles);
                                    best_overlap = std::max(best_overlap, ov);
                                }
                                nd_e += best_overlap;
                            }
                        }
                        break;
                    }
                }
            }
        }
        acc += soft_chr_from_counts(nd_b, nd_e, nr_b, nr_e);
    }
    return acc / realizations;
}

std::vector<Violation> validate_policies(const ItemSpace& space, const AssociationMatrix& assoc,
                                         const Network& net, double t_app_s, double t_disp_s,
                                         const CachePolicy& cache, const RoutingPolicy& routing) {
    std::vector<Violation> out;
    int N = assoc.sbs_count();
    int U = assoc.user_count();
    int mbs = N;

    // Cache capacity per SBS over the whole horizon.
    for (int n = 0; n < N; ++n) {
        int64_t used = cache.used_units(space, n);
        int64_t cap = to_size_units(net.cache_capacity_mbits[n]);
        if (used > cap)
            out.push_back({"cache_capacity", "sbs=" + std::to_string(n + 1),
                           (used - cap) / kUnitsPerMbit});
    }

    for (int u = 0; u < U; ++u) {
        for (int item = 0; item < space.item_count(); ++item) {
            int src = routing.source[u][item];
            if (src < 0 || src == mbs) continue;
            bool covered = assoc.covered(u, src);
            bool stored = cache.cached[src][item] != 0;
            if (!covered || !stored)
                out.push_back({"delivery_requires_cache_and_coverage",
                               "user=" + std::to_string(u + 1) + " sbs=" + std::to_string(src + 1) +
                                   " item=" + std::to_string(item),
                               1.0});
        }
    }

    // The single-source constraint cannot be violated by the map
    // representation itself; duplicate records are rejected at parse time.

    // Layer-prefix within each unit chain, plus the shared-base dependency.
    for (int u = 0; u < U; ++u) {
        for (int v = 0; v < space.V; ++v) {
            for (int g = 0; g < space.G; ++g) {
                auto delivered = [&](int level, int unit) {
                    return routing.source[u][space.item_id(v, g, space.local_index(level, unit))] >=
                           0;
                };
                if (space.has_root) {
                    bool base = delivered(0, 0);
                    for (int l = 1; l < space.chain_len; ++l)
                        for (int w = 0; w < space.units_per_level[l]; ++w) {
                            bool got = delivered(l, w);
                            bool prev = l == 1 ? base : delivered(l - 1, w);
                            if (got && !prev)
                                out.push_back({"layer_prefix",
                                               "user=" + std::to_string(u + 1) + " v=" +
                                                   std::to_string(v + 1) + " g=" +
                                                   std::to_string(g + 1) + " level=" +
                                                   std::to_string(l + 1) + " unit=" +
                                                   std::to_string(w),
                                               1.0});
                        }
                } else {
                    for (int unit = 0; unit < space.units_per_level[0]; ++unit) {
                        for (int l = 1; l < space.chain_len; ++l) {
                            if (delivered(l, unit) && !delivered(l - 1, unit))
                                out.push_back({"layer_prefix",
                                               "user=" + std::to_string(u + 1) + " v=" +
                                                   std::to_string(v + 1) + " g=" +
                                                   std::to_string(g + 1) + " level=" +
                                                   std::to_string(l + 1) + " unit=" +
                                                   std::to_string(unit + 1),
                                               1.0});
                        }
                    }
                }
            }
        }
    }

    // Delivery-delay chain: the cumulative delivered delay of every
    // (user, video) prefix must fit the accumulated per-GoP fair shares.
    for (int u = 0; u < U; ++u) {
        for (int v = 0; v < space.V; ++v) {
            double cumulative = 0.0;
            for (int g = 0; g < space.G; ++g) {
                for (int local = 0; local < space.per_vg; ++local) {
                    int src = routing.source[u][space.item_id(v, g, local)];
                    if (src < 0) continue;
                    double delay = src == mbs ? net.backhaul_delay[u]
                                              : (assoc.covered(u, src) ? net.sbs_delay[u][src] : 0.0);
                    cumulative += space.size_mbits[size_t(v) * space.per_vg + local] * delay;
                }
                double bound = t_app_s * (g + 1.0) / space.G + (g + 1.0) * t_disp_s;
                if (cumulative > bound + 1e-9) {
                    out.push_back({"delay_budget",
                                   "user=" + std::to_string(u + 1) + " v=" + std::to_string(v + 1) +
                                       " g=" + std::to_string(g + 1),
                                   cumulative - bound});
                }
            }
        }
    }
    return out;
}

}  // namespace tilecache
