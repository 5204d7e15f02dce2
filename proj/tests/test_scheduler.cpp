#include <doctest.h>

#include "metrics.hpp"
#include "oracle.hpp"
#include "scheduler.hpp"
#include "util.hpp"

using namespace tilecache;

namespace {

struct World {
    VideoLibrary lib;
    DemandModel dm;
    ItemSpace space;
    Network net;
    UserPopulation users;
    AssociationMatrix assoc;

    World(int videos, int tiles, int gops, int users_count, int n_sbs, double cache_mbits,
          uint64_t seed = 3) {
        lib.num_videos = videos;
        lib.num_gops = gops;
        lib.num_layers = 2;
        lib.grid = {1, tiles};
        lib.viewport_rows = 1;
        lib.viewport_cols = tiles >= 2 ? 2 : 1;
        lib.classes = reference_classes();
        for (int v = 0; v < videos; ++v) lib.class_of.push_back(v % 3);
        lib.viewports = default_viewports(lib.grid, lib.viewport_rows, lib.viewport_cols);
        dm = build_demand(lib, users_count, zipf_pmf(videos, 1.0),
                          viewport_pmfs(ViewportDist::BiGauss, lib, seed));
        space = make_tiled_space(lib, dm);

        for (int n = 0; n < n_sbs; ++n) {
            net.sbs_pos.push_back({n * 100.0, 0.0});
            net.sbs_radius.push_back(150.0);
        }
        net.mbs_pos = {0.0, 0.0};
        net.mbs_radius = 100000.0;
        net.cache_capacity_mbits.assign(n_sbs, cache_mbits);
        net.sbs_delay.assign(users_count, std::vector<double>(n_sbs, 1.0));
        net.backhaul_delay.assign(users_count, 5.0);
        Rng rng(seed);
        for (int u = 0; u < users_count; ++u)
            users.pos.push_back({rng.uniform(-50.0, (n_sbs - 1) * 100.0 + 50.0), 0.0});
        assoc = build_association(net, users);
    }
};

}  // namespace

TEST_CASE("per-GoP cache budget applies the floor in kilobit units") {
    // 100 Mbits over 30 GoPs: 100000/30 = 3333.33 kilobits, floored to 3333.
    CHECK(gop_cache_budget_units(to_size_units(100.0), 30, 0) == 3333);
    CHECK(gop_cache_budget_units(to_size_units(100.0), 1, 0) == 100000);
    CHECK(gop_cache_budget_units(0, 5, 0) == 0);
    CHECK(gop_cache_budget_units(to_size_units(100.0), 30, 500) == 3833);
    CHECK_THROWS_AS(gop_cache_budget_units(-1, 5, 0), std::invalid_argument);
}

TEST_CASE("per-GoP delay budget") {
    CHECK(gop_delay_budget(1.0, 1.0, 30, 0.0) == doctest::Approx(31.0 / 30.0));
    CHECK(gop_delay_budget(1.0, 1.0, 30, 0.5) == doctest::Approx(31.0 / 30.0 + 0.5));
    CHECK(gop_delay_budget(2.0, 0.5, 1, 0.0) == doctest::Approx(2.5));
    CHECK_THROWS_AS(gop_delay_budget(1.0, 1.0, 0, 0.0), std::invalid_argument);
}

TEST_CASE("a single GoP reduces to one subproblem solve") {
    World w(2, 2, 1, 2, 2, 0.4);
    FullSolution full = solve_full(w.space, w.assoc, w.net, 1.0, 1.0, SolverParams{});

    SubproblemSolver solver(w.space, w.assoc, w.net, SolverParams{});
    std::vector<int64_t> budgets(2, to_size_units(0.4));
    GopSolution sub = solver.solve(budgets, 2.0, nullptr);

    CHECK(full.report.objective == doctest::Approx(sub.lb).epsilon(1e-12));
    for (int n = 0; n < 2; ++n)
        for (int i = 0; i < w.space.vlocal_count(); ++i)
            CHECK(full.cache.cached[n][i] == sub.x[n][i]);
}

TEST_CASE("identical per-GoP problems with ample budgets give identical slices") {
    World w(2, 2, 3, 2, 2, 3.0);  // cache fits everything each GoP
    FullSolution full = solve_full(w.space, w.assoc, w.net, 0.9, 1.0, SolverParams{});
    for (int g = 1; g < 3; ++g)
        for (int n = 0; n < 2; ++n)
            for (int i = 0; i < w.space.vlocal_count(); ++i)
                CHECK(full.cache.cached[n][w.space.item_id(i / w.space.per_vg, g,
                                                           i % w.space.per_vg)] ==
                      full.cache.cached[n][w.space.item_id(i / w.space.per_vg, 0,
                                                           i % w.space.per_vg)]);
}

TEST_CASE("two-GoP horizon tracks the sequential brute-force decomposition") {
    World w(2, 2, 2, 2, 2, 0.35, 11);
    FullSolution full = solve_full(w.space, w.assoc, w.net, 1.0, 1.0, SolverParams{});

    // Sequential oracle with the same carryover rules.
    int N = 2;
    std::vector<int64_t> capacity(N, to_size_units(0.35));
    std::vector<int64_t> rem(N, 0);
    double t_rem = 0.0;
    double total = 0.0;
    for (int g = 0; g < 2; ++g) {
        std::vector<int64_t> budgets(N);
        for (int n = 0; n < N; ++n) budgets[n] = gop_cache_budget_units(capacity[n], 2, rem[n]);
        double budget_s = gop_delay_budget(1.0, 1.0, 2, t_rem);
        OracleResult exact = brute_force_joint(w.space, w.assoc, w.net, budgets, budget_s);
        total += exact.objective;
        // Oracle carryover from the exact solution.
        RoutingComponent rc(w.space, w.assoc, w.net);
        double consumed_max = 0.0;
        for (const PairProblem& prob : rc.pairs()) {
            double consumed = 0.0;
            for (int i = 0; i < prob.num_items(); ++i) {
                int vl = w.space.vlocal(prob.v, prob.items[i]);
                int src = exact.y[size_t(prob.u) * w.space.vlocal_count() + vl];
                if (src < 0) continue;
                int slot = src == rc.mbs_code()
                               ? prob.mbs_slot()
                               : int(std::find(prob.sources.begin(), prob.sources.end(), src) -
                                     prob.sources.begin());
                consumed += prob.weight[size_t(i) * prob.num_slots + slot];
            }
            consumed_max = std::max(consumed_max, consumed);
        }
        for (int n = 0; n < N; ++n) {
            int64_t used = 0;
            for (int i = 0; i < w.space.vlocal_count(); ++i)
                if (exact.x[n][i]) used += w.space.size_units[i];
            rem[n] = budgets[n] - used;
        }
        t_rem = budget_s - consumed_max;
    }

    // The solver's global objective reaches the decomposed optimum within the
    // duality-gap tolerance.
    CHECK(full.report.objective <= total + 1e-9);
    CHECK(full.report.objective >= total * (1.0 - 0.02) - 1e-9);
}

TEST_CASE("assembled policies satisfy the global constraint system") {
    World w(3, 3, 4, 3, 2, 0.6, 21);
    FullSolution full = solve_full(w.space, w.assoc, w.net, 1.0, 1.0, SolverParams{});
    auto violations =
        validate_policies(w.space, w.assoc, w.net, 1.0, 1.0, full.cache, full.routing);
    for (const auto& v : violations) CAPTURE(v.constraint + " " + v.where);
    CHECK(violations.empty());

    // Carryover bookkeeping stays nonnegative.
    for (double rem : full.report.cache_rem_mbits) CHECK(rem >= 0.0);
    CHECK(full.report.time_rem_s >= 0.0);
}

TEST_CASE("global cache use never exceeds the capacity") {
    World w(2, 3, 3, 2, 2, 0.5, 8);
    FullSolution full = solve_full(w.space, w.assoc, w.net, 1.0, 1.0, SolverParams{});
    for (int n = 0; n < 2; ++n)
        CHECK(full.cache.used_units(w.space, n) <= to_size_units(0.5));
}
