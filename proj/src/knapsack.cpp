#include "knapsack.hpp"

#include <algorithm>
#include <stdexcept>

namespace tilecache {

namespace {
constexpr int64_t kMaxCapacityUnits = 200'000'000;  // DP table guard
}

KnapsackResult solve_01_knapsack(const std::vector<KnapsackItem>& items, int64_t capacity) {
    if (capacity < 0) throw std::invalid_argument("solve_01_knapsack: capacity must be >= 0");
    for (const auto& it : items) {
        if (it.weight < 0) throw std::invalid_argument("solve_01_knapsack: negative weight");
        if (it.profit < 0.0) throw std::invalid_argument("solve_01_knapsack: negative profit");
    }

    KnapsackResult result;
    if (items.empty() || capacity == 0) {
        // Zero capacity still admits zero-weight items, but those have no
        // effect on the value under the strict-improvement rule unless their
        // profit is positive.
        if (capacity == 0) {
            for (const auto& it : items)
                if (it.weight == 0 && it.profit > 0.0) {
                    result.selected.push_back(it.id);
                    result.profit += it.profit;
                }
            std::sort(result.selected.begin(), result.selected.end());
            return result;
        }
        return result;
    }

    // Clamp the DP width to the reachable weight.
    int64_t total_weight = 0;
    for (const auto& it : items) total_weight += it.weight;
    int64_t cap = std::min(capacity, total_weight);
    if (cap > kMaxCapacityUnits)
        throw std::invalid_argument("solve_01_knapsack: capacity too large for exact DP");

    size_t n = items.size();
    size_t width = static_cast<size_t>(cap) + 1;
    std::vector<double> value(width, 0.0);
    std::vector<uint8_t> taken(n * width, 0);

    for (size_t i = 0; i < n; ++i) {
        int64_t w = items[i].weight;
        double p = items[i].profit;
        if (w > cap) continue;
        uint8_t* row = &taken[i * width];
        if (w == 0) {
            if (p > 0.0) {
                for (size_t c = 0; c < width; ++c) {
                    value[c] += p;
                    row[c] = 1;
                }
            }
            continue;
        }
        for (int64_t c = cap; c >= w; --c) {
            double with = value[c - w] + p;
            if (with > value[c]) {
                value[c] = with;
                row[c] = 1;
            }
        }
    }

    result.profit = value[cap];
    int64_t c = cap;
    for (size_t i = n; i-- > 0;) {
        if (taken[i * width + c]) {
            result.selected.push_back(items[i].id);
            result.used += items[i].weight;
            c -= items[i].weight;
        }
    }
    std::sort(result.selected.begin(), result.selected.end());
    return result;
}

CachingSolution solve_caching_component(const std::vector<std::vector<double>>& profits,
                                        const std::vector<int64_t>& size_units,
                                        const std::vector<int64_t>& capacity_units) {
    size_t N = profits.size();
    if (capacity_units.size() != N)
        throw std::invalid_argument("solve_caching_component: capacity per SBS required");

    CachingSolution sol;
    sol.cached.assign(N, std::vector<uint8_t>(size_units.size(), 0));
    sol.profit.assign(N, 0.0);
    sol.used_units.assign(N, 0);

    std::vector<KnapsackItem> items;
    for (size_t n = 0; n < N; ++n) {
        if (profits[n].size() != size_units.size())
            throw std::invalid_argument("solve_caching_component: profit table size mismatch");
        items.clear();
        for (size_t i = 0; i < size_units.size(); ++i) {
            if (profits[n][i] > 0.0)
                items.push_back({static_cast<int>(i), size_units[i], profits[n][i]});
        }
        KnapsackResult r = solve_01_knapsack(items, capacity_units[n]);
        for (int id : r.selected) sol.cached[n][id] = 1;
        sol.profit[n] = r.profit;
        sol.used_units[n] = r.used;
        sol.total_profit += r.profit;
    }
    return sol;
}

}  // namespace tilecache
