#include <doctest.h>

#include "knapsack.hpp"
#include "oracle.hpp"
#include "util.hpp"

using namespace tilecache;

TEST_CASE("knapsack basics") {
    std::vector<KnapsackItem> items = {{1, 2, 3.0}, {2, 3, 4.0}, {3, 4, 5.0}};

    SUBCASE("zero capacity selects nothing") {
        auto r = solve_01_knapsack(items, 0);
        CHECK(r.selected.empty());
        CHECK(r.profit == 0.0);
    }
    SUBCASE("the classic three-item instance") {
        // Brute force over the 8 subsets gives {1,2} with profit 7 at cap 5.
        auto r = solve_01_knapsack(items, 5);
        CHECK(r.selected == std::vector<int>{1, 2});
        CHECK(r.profit == doctest::Approx(7.0));
        CHECK(r.profit == doctest::Approx(brute_force_knapsack(items, 5)));
    }
    SUBCASE("everything fits when the total weight does") {
        auto r = solve_01_knapsack(items, 9);
        CHECK(r.selected == std::vector<int>{1, 2, 3});
        CHECK(r.profit == doctest::Approx(12.0));
    }
}

TEST_CASE("zero-profit items are never selected") {
    std::vector<KnapsackItem> items = {{0, 1, 0.0}, {1, 1, 2.0}, {2, 1, 0.0}};
    auto r = solve_01_knapsack(items, 3);
    CHECK(r.selected == std::vector<int>{1});
}

TEST_CASE("DP equals the exhaustive optimum on random instances") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + rng.uniform_int(20);
        std::vector<KnapsackItem> items;
        int64_t total = 0;
        for (int i = 0; i < n; ++i) {
            int64_t w = rng.uniform_int(50);
            items.push_back({i, w, rng.uniform(0.0, 10.0)});
            total += w;
        }
        int64_t cap = rng.uniform_int(static_cast<int>(total) + 2);
        auto dp = solve_01_knapsack(items, cap);
        double exact = brute_force_knapsack(items, cap);
        CHECK(dp.profit == doctest::Approx(exact).epsilon(1e-12));

        int64_t used = 0;
        for (int id : dp.selected) used += items[id].weight;
        CHECK(used <= cap);
    }
}

TEST_CASE("optimal profit is non-decreasing in capacity") {
    Rng rng(99);
    std::vector<KnapsackItem> items;
    for (int i = 0; i < 12; ++i) items.push_back({i, 1 + rng.uniform_int(20), rng.uniform(0.1, 5.0)});
    double prev = -1.0;
    for (int64_t cap = 0; cap <= 60; cap += 5) {
        double profit = solve_01_knapsack(items, cap).profit;
        CHECK(profit >= prev - 1e-12);
        prev = profit;
    }
}

TEST_CASE("caching component solves one knapsack per SBS") {
    SUBCASE("zero multipliers cache nothing") {
        std::vector<std::vector<double>> profits(2, std::vector<double>(4, 0.0));
        std::vector<int64_t> sizes = {10, 125, 10, 125};
        CachingSolution sol = solve_caching_component(profits, sizes, {1000, 1000});
        for (int n = 0; n < 2; ++n)
            for (int i = 0; i < 4; ++i) CHECK(sol.cached[n][i] == 0);
        CHECK(sol.total_profit == 0.0);
    }

    SUBCASE("tight capacity keeps only the base-layer item") {
        // Hog Rider layer sizes 0.010 / 0.125 Mbits, capacity 0.02 Mbits.
        std::vector<std::vector<double>> profits = {{5.0, 1.0}};
        std::vector<int64_t> sizes = {to_size_units(0.010), to_size_units(0.125)};
        CachingSolution sol = solve_caching_component(profits, sizes, {to_size_units(0.02)});
        CHECK(sol.cached[0][0] == 1);
        CHECK(sol.cached[0][1] == 0);
        CHECK(sol.profit[0] == doctest::Approx(5.0));
    }

    SUBCASE("per-SBS independence equals the joint optimum") {
        Rng rng(5);
        for (int trial = 0; trial < 25; ++trial) {
            int items = 2 + rng.uniform_int(5);
            std::vector<int64_t> sizes;
            for (int i = 0; i < items; ++i) sizes.push_back(1 + rng.uniform_int(30));
            std::vector<std::vector<double>> profits(2, std::vector<double>(items));
            for (int n = 0; n < 2; ++n)
                for (int i = 0; i < items; ++i)
                    profits[n][i] = rng.uniform_int(3) == 0 ? 0.0 : rng.uniform(0.0, 4.0);
            std::vector<int64_t> caps = {5 + rng.uniform_int(40), 5 + rng.uniform_int(40)};

            CachingSolution joint = solve_caching_component(profits, sizes, caps);
            double separate = 0.0;
            for (int n = 0; n < 2; ++n) {
                std::vector<KnapsackItem> ki;
                for (int i = 0; i < items; ++i)
                    if (profits[n][i] > 0.0) ki.push_back({i, sizes[i], profits[n][i]});
                separate += brute_force_knapsack(ki, caps[n]);
            }
            CHECK(joint.total_profit == doctest::Approx(separate).epsilon(1e-12));
        }
    }
}
