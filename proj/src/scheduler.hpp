// Splits the horizon into per-GoP subproblems under the fairness constraint,
// threads unused cache space and delivery time from one GoP to the next, and
// assembles the global caching and routing policy.
#pragma once

#include <cstdint>
#include <vector>

#include "lagrangian.hpp"

namespace tilecache {

// Per-GoP cache budget in kilobit units: the fair share plus what the
// previous GoP left unused. Integer arithmetic keeps the floor exact.
int64_t gop_cache_budget_units(int64_t capacity_units, int num_gops, int64_t remaining_units);

// Per-GoP delivery budget in seconds: amortized startup delay plus one GoP
// display time plus the slack left by the previous GoP.
double gop_delay_budget(double t_app_s, double t_disp_s, int num_gops, double remaining_s);

struct CachePolicy {
    // cached[n][item_id] over the full horizon item index.
    std::vector<std::vector<uint8_t>> cached;
    int64_t used_units(const ItemSpace& space, int n) const;
};

struct RoutingPolicy {
    // source[u][item_id]: SBS id, mbs_code for the MBS, -1 for not delivered.
    int mbs_code = 0;
    std::vector<std::vector<int8_t>> source;
};

struct SolveReport {
    std::vector<GopReport> gops;
    double objective = 0.0;  // D over the full horizon
    std::vector<double> cache_rem_mbits;  // per SBS, after the last GoP
    double time_rem_s = 0.0;
    double wall_s = 0.0;

    int total_iterations() const;
    int median_iterations() const;
    double max_final_gap() const;
    bool all_converged() const;
};

struct FullSolution {
    CachePolicy cache;
    RoutingPolicy routing;
    SolveReport report;
};

// Algorithm: solve the GoPs sequentially with carryover, then take the union
// of the per-GoP policies.
FullSolution solve_full(const ItemSpace& space, const AssociationMatrix& assoc,
                        const Network& net, double t_app_s, double t_disp_s,
                        const SolverParams& params);

}  // namespace tilecache
