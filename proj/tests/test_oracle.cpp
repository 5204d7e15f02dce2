#include <doctest.h>

#include <algorithm>

#include "lagrangian.hpp"
#include "oracle.hpp"
#include "util.hpp"

using namespace tilecache;

namespace {

struct OracleWorld {
    VideoLibrary lib;
    DemandModel dm;
    ItemSpace space;
    Network net;
    UserPopulation users;
    AssociationMatrix assoc;
    std::vector<int64_t> budgets;

    OracleWorld(int videos, int tiles, int users_count, int n_sbs, double cache_mbits,
                uint64_t seed) {
        lib.num_videos = videos;
        lib.num_gops = 1;
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
            net.sbs_pos.push_back({n * 120.0, 0.0});
            net.sbs_radius.push_back(170.0);
        }
        net.mbs_pos = {0.0, 0.0};
        net.mbs_radius = 100000.0;
        net.cache_capacity_mbits.assign(n_sbs, cache_mbits);
        net.sbs_delay.assign(users_count, std::vector<double>(n_sbs, 1.0));
        net.backhaul_delay.assign(users_count, 5.0);
        Rng rng(seed);
        for (int u = 0; u < users_count; ++u)
            users.pos.push_back({rng.uniform(-100.0, (n_sbs - 1) * 120.0 + 100.0), 0.0});
        assoc = build_association(net, users);
        budgets.assign(n_sbs, to_size_units(cache_mbits));
    }
};

}  // namespace

TEST_CASE("knapsack oracle basics and bounds") {
    CHECK(brute_force_knapsack({}, 10) == 0.0);
    std::vector<KnapsackItem> items = {{0, 2, 3.0}, {1, 3, 4.0}, {2, 4, 5.0}};
    CHECK(brute_force_knapsack(items, 5) == doctest::Approx(7.0));
    std::vector<KnapsackItem> too_many(21, {0, 1, 1.0});
    CHECK_THROWS_AS(brute_force_knapsack(too_many, 5), TooLargeError);
}

TEST_CASE("zero demand gives a zero optimum with empty policies") {
    OracleWorld w(1, 2, 1, 1, 1.0, 3);
    for (double& z : w.space.zbar) z = 0.0;
    w.space.Delta = 0.0;
    OracleResult r = brute_force_joint(w.space, w.assoc, w.net, w.budgets, 1.0);
    CHECK(r.objective == 0.0);
    for (const auto& xn : r.x)
        for (uint8_t b : xn) CHECK(b == 0);
}

TEST_CASE("everything fits: full service is optimal") {
    OracleWorld w(1, 1, 1, 1, 1.0, 4);
    w.users.pos[0] = {0.0, 0.0};
    w.assoc = build_association(w.net, w.users);
    OracleResult r = brute_force_joint(w.space, w.assoc, w.net, w.budgets, 5.0);
    CHECK(r.objective == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("collaboration signature: two SBSs split distinct items") {
    // Two SBSs fully covering both users, each cache fits exactly one
    // enhancement tile of the single video; the optimum caches two distinct
    // enhancement tiles rather than duplicating one.
    OracleWorld w(1, 2, 2, 2, 0.125, 5);
    w.net.sbs_pos = {{0.0, 0.0}, {10.0, 0.0}};
    w.net.sbs_radius = {500.0, 500.0};
    w.users.pos = {{0.0, 0.0}, {5.0, 0.0}};
    w.assoc = build_association(w.net, w.users);
    REQUIRE(w.assoc.covering_sbs(0).size() == 2);
    REQUIRE(w.assoc.covering_sbs(1).size() == 2);

    // Budget admits base layers over the backhaul plus one enhancement tile
    // from an SBS per user-video, so enhancement variety is what pays.
    OracleResult r = brute_force_joint(w.space, w.assoc, w.net, w.budgets, 0.8);

    // Both base tiles (Hog Rider, 0.01 Mbits) fit no cache of 0.125 Mbits
    // alongside an enhancement tile, so each SBS holds one enhancement tile.
    std::vector<int> enh_cached;
    for (int n = 0; n < 2; ++n)
        for (int t = 0; t < 2; ++t)
            if (r.x[n][w.space.local_index(1, t)]) enh_cached.push_back(t);
    REQUIRE(enh_cached.size() == 2);
    CHECK(enh_cached[0] != enh_cached[1]);
}

TEST_CASE("oracle value is invariant to item permutation") {
    OracleWorld w(2, 2, 2, 2, 0.3, 6);
    OracleResult base = brute_force_joint(w.space, w.assoc, w.net, w.budgets, 1.0);

    // Swap the two videos wholesale (sizes, deltas, demand).
    ItemSpace permuted = w.space;
    for (int local = 0; local < w.space.per_vg; ++local) {
        std::swap(permuted.size_mbits[permuted.vlocal(0, local)],
                  permuted.size_mbits[permuted.vlocal(1, local)]);
        std::swap(permuted.size_units[permuted.vlocal(0, local)],
                  permuted.size_units[permuted.vlocal(1, local)]);
        std::swap(permuted.delta[permuted.vlocal(0, local)],
                  permuted.delta[permuted.vlocal(1, local)]);
        std::swap(permuted.zbar[permuted.vlocal(0, local)],
                  permuted.zbar[permuted.vlocal(1, local)]);
    }
    std::swap(permuted.video_pmf[0], permuted.video_pmf[1]);
    std::swap(permuted.per_video[0], permuted.per_video[1]);
    OracleResult swapped = brute_force_joint(permuted, w.assoc, w.net, w.budgets, 1.0);
    CHECK(base.objective == doctest::Approx(swapped.objective).epsilon(1e-12));
}

TEST_CASE("the size bound is enforced, not truncated") {
    OracleWorld w(3, 4, 1, 2, 1.0, 7);  // 2 SBSs x 24 items = 48 slots > 16
    CHECK_THROWS_AS(brute_force_joint(w.space, w.assoc, w.net, w.budgets, 1.0), TooLargeError);
}

TEST_CASE("weak duality against the oracle optimum") {
    OracleWorld w(2, 2, 2, 1, 0.25, 8);
    OracleResult exact = brute_force_joint(w.space, w.assoc, w.net, w.budgets, 1.0);

    SolverParams params;
    SubproblemSolver solver(w.space, w.assoc, w.net, params);
    GopReport report;
    solver.solve(w.budgets, 1.0, &report);
    CHECK(report.ub >= exact.objective - 1e-9);
    CHECK(report.lb <= exact.objective + 1e-9);
}
