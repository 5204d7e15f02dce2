#include <doctest.h>

#include <stdexcept>

#include "oracle.hpp"
#include "routing.hpp"
#include "util.hpp"

using namespace tilecache;

namespace {

// One user, one video, MBS plus n_sbs covered SBSs, tiles x layers chains.
struct PairFixture {
    PairProblem prob;
    std::vector<double> gains;
    std::vector<uint32_t> allowed;

    PairFixture(int tiles, int layers, std::vector<double> o, std::vector<double> util,
                std::vector<double> sbs_delays, double mbs_delay) {
        prob.u = 0;
        prob.v = 0;
        for (size_t s = 0; s < sbs_delays.size(); ++s) prob.sources.push_back(static_cast<int>(s));
        prob.num_slots = static_cast<int>(sbs_delays.size()) + 1;
        for (int t = 0; t < tiles; ++t) {
            PairGroup grp;
            for (int l = 0; l < layers; ++l) {
                int idx = prob.num_items();
                grp.item_idx.push_back(idx);
                prob.items.push_back(l * tiles + t);
                for (double d : sbs_delays) prob.weight.push_back(o[l] * d);
                prob.weight.push_back(o[l] * mbs_delay);
                prob.bits.push_back(to_size_units(o[l]));
                prob.coefz.push_back(util[l]);
            }
            prob.groups.push_back(grp);
        }
        gains.assign(size_t(prob.num_items()) * prob.num_slots, 0.0);
        allowed.assign(prob.num_items(), (1u << prob.num_slots) - 1u);
        for (int i = 0; i < prob.num_items(); ++i)
            for (int s = 0; s < prob.num_slots; ++s)
                gains[size_t(i) * prob.num_slots + s] = prob.coefz[i];
    }
};

}  // namespace

TEST_CASE("zero budget delivers nothing") {
    PairFixture f(3, 2, {0.01, 0.125}, {1.0, 1.0}, {1.0}, 5.0);
    PairSolution sol = PairSolver::solve(f.prob, f.gains.data(), f.allowed.data(), 0.0);
    CHECK(sol.gain == 0.0);
    CHECK(sol.deliveries.empty());
    CHECK_THROWS_AS(PairSolver::solve(f.prob, f.gains.data(), f.allowed.data(), -1.0),
                    std::invalid_argument);
}

TEST_CASE("single tile over the backhaul: both layers fit a 1 s budget") {
    // z = (1,1), delta = (118,125), Delta = 243, sizes (0.010, 0.125) Mbits,
    // 5 s/Mbit backhaul: depth 2 needs 0.675 s and yields (118+125)/243 = 1.
    PairFixture f(1, 2, {0.010, 0.125}, {118.0 / 243.0, 125.0 / 243.0}, {}, 5.0);
    PairSolution sol = PairSolver::solve(f.prob, f.gains.data(), f.allowed.data(), 1.0);
    CHECK(sol.gain == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.consumed_s == doctest::Approx(0.675).epsilon(1e-12));
    CHECK(sol.deliveries.size() == 2);

    // With 0.1 s only the base layer fits: 0.05 s and 118/243.
    PairSolution tight = PairSolver::solve(f.prob, f.gains.data(), f.allowed.data(), 0.1);
    CHECK(tight.gain == doctest::Approx(118.0 / 243.0).epsilon(1e-12));
    CHECK(tight.deliveries.size() == 1);
    auto oracle = brute_force_routing(f.prob, f.gains.data(), f.allowed.data(), 0.1);
    CHECK(tight.gain == doctest::Approx(oracle.gain).epsilon(1e-12));
}

TEST_CASE("no allowed sources means nothing is delivered") {
    PairFixture f(2, 2, {0.01, 0.125}, {1.0, 1.0}, {1.0}, 5.0);
    std::fill(f.allowed.begin(), f.allowed.end(), 0u);
    PairSolution sol = PairSolver::solve(f.prob, f.gains.data(), f.allowed.data(), 10.0);
    CHECK(sol.gain == 0.0);
    CHECK(sol.deliveries.empty());
}

TEST_CASE("a negative-gain base layer is carried by a profitable enhancement") {
    PairFixture f(1, 2, {0.1, 0.1}, {0.0, 0.0}, {1.0}, 5.0);
    // Base layer loses 0.2, enhancement gains 0.5: the prefix bundle nets 0.3.
    for (int s = 0; s < f.prob.num_slots; ++s) {
        f.gains[size_t(0) * f.prob.num_slots + s] = -0.2;
        f.gains[size_t(1) * f.prob.num_slots + s] = 0.5;
    }
    PairSolution sol = PairSolver::solve(f.prob, f.gains.data(), f.allowed.data(), 10.0);
    CHECK(sol.gain == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(sol.deliveries.size() == 2);

    // If the bundle nets negative, nothing is delivered.
    f.gains[size_t(1) * f.prob.num_slots + 0] = 0.1;
    f.gains[size_t(1) * f.prob.num_slots + 1] = 0.1;
    PairSolution none = PairSolver::solve(f.prob, f.gains.data(), f.allowed.data(), 10.0);
    CHECK(none.gain == 0.0);
    CHECK(none.deliveries.empty());
}

TEST_CASE("branch and bound equals exhaustive enumeration on random instances") {
    Rng rng(314159);
    for (int trial = 0; trial < 120; ++trial) {
        int tiles = 1 + rng.uniform_int(6);
        int layers = 1 + rng.uniform_int(2);
        int n_sbs = rng.uniform_int(3);
        std::vector<double> o, util, delays;
        for (int l = 0; l < layers; ++l) {
            o.push_back((1 + rng.uniform_int(250)) * 0.002);
            util.push_back(rng.uniform(0.0, 1.0));
        }
        for (int s = 0; s < n_sbs; ++s) delays.push_back(0.5 + 0.5 * rng.uniform_int(4));
        PairFixture f(tiles, layers, o, util, delays, 5.0);
        // Random multiplier-like perturbations on SBS gains and random masks.
        for (int i = 0; i < f.prob.num_items(); ++i) {
            for (int s = 0; s + 1 < f.prob.num_slots; ++s)
                f.gains[size_t(i) * f.prob.num_slots + s] -= rng.uniform(0.0, 0.8);
            uint32_t mask = 1u << (f.prob.num_slots - 1);
            for (int s = 0; s + 1 < f.prob.num_slots; ++s)
                if (rng.uniform() < 0.7) mask |= 1u << s;
            f.allowed[i] = mask;
        }
        double budget = rng.uniform(0.0, 2.0);
        PairSolution bb = PairSolver::solve(f.prob, f.gains.data(), f.allowed.data(), budget);
        auto exact = brute_force_routing(f.prob, f.gains.data(), f.allowed.data(), budget);
        CHECK(bb.gain == doctest::Approx(exact.gain).epsilon(1e-9));
    }
}

TEST_CASE("quantized DP cross-checks the branch and bound") {
    Rng rng(2718);
    for (int trial = 0; trial < 60; ++trial) {
        int tiles = 1 + rng.uniform_int(5);
        std::vector<double> o = {(1 + rng.uniform_int(100)) * 0.002,
                                 (1 + rng.uniform_int(200)) * 0.002};
        PairFixture f(tiles, 2, o, {rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0)},
                      {1.0, 2.0}, 5.0);
        double budget = rng.uniform_int(1500) * 0.001;
        PairSolution bb = PairSolver::solve(f.prob, f.gains.data(), f.allowed.data(), budget);
        double dp = PairSolver::solve_dp_value(f.prob, f.gains.data(), f.allowed.data(), budget,
                                               0.001);
        CHECK(bb.gain == doctest::Approx(dp).epsilon(1e-9));
    }
}

TEST_CASE("DP rejects weights that the quantum cannot represent") {
    PairFixture f(1, 1, {0.0835}, {1.0}, {1.0}, 5.0);  // 83.5 ms at 1 ms quantum
    CHECK_THROWS_AS(
        PairSolver::solve_dp_value(f.prob, f.gains.data(), f.allowed.data(), 1.0, 0.001),
        std::invalid_argument);
}

TEST_CASE("solution checker catches constructed violations") {
    PairFixture f(2, 2, {0.01, 0.125}, {0.5, 0.5}, {1.0}, 5.0);
    PairSolution sol;
    SUBCASE("budget") {
        sol.deliveries = {{0, 1}, {1, 1}};  // 0.675 s over the backhaul
        sol.gain = 1.0;
        CHECK_THROWS_AS(check_pair_solution(f.prob, f.gains.data(), f.allowed.data(), 0.1, sol),
                        std::logic_error);
    }
    SUBCASE("layer prefix") {
        sol.deliveries = {{1, 0}};  // enhancement without base
        sol.gain = 0.5;
        CHECK_THROWS_AS(check_pair_solution(f.prob, f.gains.data(), f.allowed.data(), 10.0, sol),
                        std::logic_error);
    }
    SUBCASE("disallowed source") {
        f.allowed[0] = 1u << 1;  // MBS only
        sol.deliveries = {{0, 0}};
        sol.gain = 0.5;
        CHECK_THROWS_AS(check_pair_solution(f.prob, f.gains.data(), f.allowed.data(), 10.0, sol),
                        std::logic_error);
    }
}

namespace {

struct ComponentFixture {
    VideoLibrary lib;
    DemandModel dm;
    ItemSpace space;
    Network net;
    UserPopulation users;
    AssociationMatrix assoc;

    ComponentFixture(int videos, int users_count, int n_sbs) {
        lib.num_videos = videos;
        lib.num_gops = 1;
        lib.num_layers = 2;
        lib.grid = {1, 2};
        lib.viewport_rows = 1;
        lib.viewport_cols = 2;
        lib.classes = reference_classes();
        lib.class_of.assign(videos, 0);
        lib.viewports = default_viewports(lib.grid, 1, 2);
        dm = build_demand(lib, users_count, zipf_pmf(videos, 1.0),
                          viewport_pmfs(ViewportDist::BiGauss, lib, 3));
        space = make_tiled_space(lib, dm);

        for (int n = 0; n < n_sbs; ++n) {
            net.sbs_pos.push_back({n * 10.0, 0.0});
            net.sbs_radius.push_back(1000.0);
        }
        net.mbs_pos = {0.0, 0.0};
        net.mbs_radius = 100000.0;
        net.cache_capacity_mbits.assign(n_sbs, 1.0);
        net.sbs_delay.assign(users_count, std::vector<double>(n_sbs, 1.0));
        net.backhaul_delay.assign(users_count, 5.0);
        for (int u = 0; u < users_count; ++u) users.pos.push_back({0.0, 0.0});
        assoc = build_association(net, users);
    }
};

}  // namespace

TEST_CASE("repair mode with empty caches delivers only over the backhaul") {
    ComponentFixture f(2, 2, 2);
    RoutingComponent rc(f.space, f.assoc, f.net);
    std::vector<std::vector<uint8_t>> empty_cache(2,
                                                  std::vector<uint8_t>(f.space.vlocal_count(), 0));
    RoutingOutcome out = rc.solve(RoutingMode::Repair, 2.0, nullptr, &empty_cache);
    for (int8_t src : out.y) CHECK((src == -1 || src == rc.mbs_code()));
    CHECK(out.value > 0.0);
}

TEST_CASE("relaxed mode with huge multipliers routes everything through the MBS") {
    ComponentFixture f(2, 2, 2);
    RoutingComponent rc(f.space, f.assoc, f.net);
    LambdaStore lambda(f.space, f.assoc, 1e9);
    RoutingOutcome out = rc.solve(RoutingMode::Relaxed, 2.0, &lambda, nullptr);
    for (int8_t src : out.y) CHECK((src == -1 || src == rc.mbs_code()));
}

TEST_CASE("per-pair decomposition: the joint objective is the sum of pair optima") {
    ComponentFixture f(2, 2, 1);
    RoutingComponent rc(f.space, f.assoc, f.net);
    RoutingOutcome joint = rc.solve(RoutingMode::Relaxed, 1.0, nullptr, nullptr);
    double sum = 0.0;
    for (const PairProblem& prob : rc.pairs()) {
        std::vector<double> g(size_t(prob.num_items()) * prob.num_slots, 0.0);
        std::vector<uint32_t> a(prob.num_items(), 0);
        rc.build_gains_relaxed(prob, nullptr, g.data(), a.data());
        sum += PairSolver::solve(prob, g.data(), a.data(), 1.0).gain;
    }
    CHECK(joint.value == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("repair value never exceeds the relaxed value at zero multipliers") {
    ComponentFixture f(3, 2, 2);
    RoutingComponent rc(f.space, f.assoc, f.net);
    std::vector<std::vector<uint8_t>> some_cache(2, std::vector<uint8_t>(f.space.vlocal_count(), 0));
    some_cache[0][0] = 1;
    some_cache[1][1] = 1;
    RoutingOutcome repair = rc.solve(RoutingMode::Repair, 1.0, nullptr, &some_cache);
    RoutingOutcome relaxed = rc.solve(RoutingMode::Relaxed, 1.0, nullptr, nullptr);
    CHECK(repair.value <= relaxed.value + 1e-12);
}
