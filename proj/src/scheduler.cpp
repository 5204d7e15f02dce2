#include "scheduler.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "util.hpp"

namespace tilecache {

int64_t gop_cache_budget_units(int64_t capacity_units, int num_gops, int64_t remaining_units) {
    if (capacity_units < 0 || remaining_units < 0)
        throw std::invalid_argument("gop_cache_budget_units: inputs must be >= 0");
    if (num_gops < 1) throw std::invalid_argument("gop_cache_budget_units: need at least one GoP");
    return capacity_units / num_gops + remaining_units;
}

double gop_delay_budget(double t_app_s, double t_disp_s, int num_gops, double remaining_s) {
    if (t_app_s < 0.0 || t_disp_s < 0.0 || remaining_s < 0.0)
        throw std::invalid_argument("gop_delay_budget: inputs must be >= 0");
    if (num_gops < 1) throw std::invalid_argument("gop_delay_budget: need at least one GoP");
    return t_app_s / num_gops + t_disp_s + remaining_s;
}

int64_t CachePolicy::used_units(const ItemSpace& space, int n) const {
    int64_t used = 0;
    int block = space.G * space.per_vg;
    for (int item = 0; item < space.item_count(); ++item) {
        if (!cached[n][item]) continue;
        int v = item / block;
        int local = item % space.per_vg;
        used += space.size_units[size_t(v) * space.per_vg + local];
    }
    return used;
}

int SolveReport::total_iterations() const {
    int total = 0;
    for (const auto& g : gops) total += g.iterations;
    return total;
}

int SolveReport::median_iterations() const {
    if (gops.empty()) return 0;
    std::vector<int> iters;
    iters.reserve(gops.size());
    for (const auto& g : gops) iters.push_back(g.iterations);
    std::sort(iters.begin(), iters.end());
    return iters[iters.size() / 2];
}

double SolveReport::max_final_gap() const {
    double gap = 0.0;
    for (const auto& g : gops) gap = std::max(gap, g.gap);
    return gap;
}

bool SolveReport::all_converged() const {
    for (const auto& g : gops)
        if (!g.converged) return false;
    return true;
}

FullSolution solve_full(const ItemSpace& space, const AssociationMatrix& assoc,
                        const Network& net, double t_app_s, double t_disp_s,
                        const SolverParams& params) {
    auto start = std::chrono::steady_clock::now();
    int N = assoc.sbs_count();
    int U = assoc.user_count();
    int vc = space.vlocal_count();

    FullSolution out;
    out.cache.cached.assign(N, std::vector<uint8_t>(space.item_count(), 0));
    out.routing.mbs_code = N;
    out.routing.source.assign(U, std::vector<int8_t>(space.item_count(), -1));

    SubproblemSolver solver(space, assoc, net, params);

    std::vector<int64_t> capacity_units(N);
    for (int n = 0; n < N; ++n) capacity_units[n] = to_size_units(net.cache_capacity_mbits[n]);

    std::vector<int64_t> cache_rem(N, 0);
    double t_rem = 0.0;

    for (int g = 0; g < space.G; ++g) {
        std::vector<int64_t> budgets(N);
        for (int n = 0; n < N; ++n)
            budgets[n] = gop_cache_budget_units(capacity_units[n], space.G, cache_rem[n]);
        double budget_s = gop_delay_budget(t_app_s, t_disp_s, space.G, t_rem);

        GopReport report;
        report.gop = g;
        GopSolution sol = solver.solve(budgets, budget_s, &report);

        for (int n = 0; n < N; ++n) {
            cache_rem[n] = budgets[n] - sol.used_units[n];
            for (int i = 0; i < vc; ++i)
                if (sol.x[n][i])
                    out.cache.cached[n][space.item_id(i / space.per_vg, g, i % space.per_vg)] = 1;
        }
        // Conservative scalar carryover: the slack of the busiest (user, video)
        // bundle, so no user's per-GoP budget is ever exceeded downstream.
        t_rem = budget_s - sol.consumed_max_s;
        if (t_rem < 0.0) t_rem = 0.0;

        for (int u = 0; u < U; ++u)
            for (int i = 0; i < vc; ++i) {
                int8_t src = sol.y[size_t(u) * vc + i];
                if (src >= 0)
                    out.routing.source[u][space.item_id(i / space.per_vg, g, i % space.per_vg)] = src;
            }

        out.report.objective += sol.lb;
        out.report.gops.push_back(std::move(report));
        log_debug("gop " + std::to_string(g + 1) + ": iters=" +
                  std::to_string(out.report.gops.back().iterations) +
                  " lb=" + fmt_double(sol.lb));
    }

    out.report.cache_rem_mbits.assign(N, 0.0);
    for (int n = 0; n < N; ++n) out.report.cache_rem_mbits[n] = cache_rem[n] / kUnitsPerMbit;
    out.report.time_rem_s = t_rem;
    out.report.wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace tilecache
