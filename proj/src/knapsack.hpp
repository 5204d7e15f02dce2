// Exact 0-1 knapsack by dynamic programming over integer weight units, and its
// application as the caching component: one independent knapsack per SBS.
#pragma once

#include <cstdint>
#include <vector>

namespace tilecache {

struct KnapsackItem {
    int id = 0;
    int64_t weight = 0;  // integer units (kilobits here)
    double profit = 0.0;
};

struct KnapsackResult {
    std::vector<int> selected;  // ids, ascending
    double profit = 0.0;
    int64_t used = 0;
};

// Profit-maximal subset with total weight <= capacity. Items are only taken
// when they strictly improve the value, so the backtrack is deterministic,
// zero-profit items are never selected, and among equal-profit optima the
// result prefers fewer and lower-index items.
KnapsackResult solve_01_knapsack(const std::vector<KnapsackItem>& items, int64_t capacity);

// Caching component: per SBS n, maximize sum of profits of cached items
// subject to the per-GoP capacity. profits[n] and sizes are indexed by the
// per-(v,local) item index; out[n][i] is set to 1 for cached items.
struct CachingSolution {
    std::vector<std::vector<uint8_t>> cached;  // [n][vlocal]
    std::vector<double> profit;                // per SBS
    std::vector<int64_t> used_units;           // per SBS
    double total_profit = 0.0;
};

CachingSolution solve_caching_component(const std::vector<std::vector<double>>& profits,
                                        const std::vector<int64_t>& size_units,
                                        const std::vector<int64_t>& capacity_units);

}  // namespace tilecache
