// Evaluation quantities computed from policies: normalized distortion
// reduction, cache hit ratio, soft cache hit ratio over realized requests, and
// the independent constraint validator.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scheduler.hpp"

namespace tilecache {

// D = (1/Delta) * sum of z*delta*alpha*y over all delivered items; 1 means
// every probabilistically weighted request is served.
double distortion_reduction(const ItemSpace& space, const AssociationMatrix& assoc,
                            const RoutingPolicy& routing);

// z-weighted fraction of requested items served from an SBS cache.
double cache_hit_ratio(const ItemSpace& space, const RoutingPolicy& routing);

// (nd_b + nd_e) / (nr_b + nr_e) for one realization.
double soft_chr_from_counts(int64_t nd_base, int64_t nd_enh, int64_t nr_base, int64_t nr_enh);

// Seeded Monte Carlo over realized (video, viewport) requests. For the
// version and layered granularities an undelivered requested viewport may be
// substituted by the maximally overlapping cached one (ties to the lowest
// viewport id); overlap tiles count as enhancement-quality hits.
double soft_cache_hit_ratio(const ItemSpace& space, const RoutingPolicy& routing, uint64_t seed,
                            int realizations);

struct Violation {
    std::string constraint;
    std::string where;
    double amount = 0.0;
};

// Checks the five constraint families on assembled policies: cache capacity,
// delivery-requires-cache-and-coverage, single source per item, layer prefix,
// and the per-(user, video) delivery-delay chain implied by the per-GoP
// fairness split. Returns an empty list iff the policies are feasible.
std::vector<Violation> validate_policies(const ItemSpace& space, const AssociationMatrix& assoc,
                                         const Network& net, double t_app_s, double t_disp_s,
                                         const CachePolicy& cache, const RoutingPolicy& routing);

}  // namespace tilecache
