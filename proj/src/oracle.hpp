// Brute-force exact solvers for desk-scale instances: the ground truth for
// the optimality tests. Size bounds are asserted, never silently truncated.
#pragma once

#include <stdexcept>

#include "knapsack.hpp"
#include "routing.hpp"

namespace tilecache {

struct TooLargeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr int kOracleMaxKnapsackItems = 20;
constexpr int64_t kOracleMaxRoutingCombos = 20'000'000;
constexpr int kOracleMaxCacheSlots = 16;

// Exhaustive 0-1 knapsack optimum (subset recursion, <= 20 items).
double brute_force_knapsack(const std::vector<KnapsackItem>& items, int64_t capacity);

struct OraclePairResult {
    double gain = 0.0;
    std::vector<PairDelivery> deliveries;
};

// Exhaustive optimum of one per-(user, video) routing instance. Enumerates
// every per-group (depth, source-vector) combination; only the trivially
// sound suffix-of-maxima bound is used to cut the walk.
OraclePairResult brute_force_routing(const PairProblem& prob, const double* gains,
                                     const uint32_t* allowed, double budget_s);

struct OracleResult {
    double objective = 0.0;               // exact D_g*
    std::vector<std::vector<uint8_t>> x;  // [n][vlocal]
    std::vector<int8_t> y;                // [u * vlocal_count + vlocal]
};

// Exact optimum of one per-GoP subproblem: enumerate every capacity-feasible
// joint cache assignment, solve the routing exactly for each, and keep the
// first maximizer in enumeration order.
OracleResult brute_force_joint(const ItemSpace& space, const AssociationMatrix& assoc,
                               const Network& net, const std::vector<int64_t>& cache_units,
                               double budget_s);

}  // namespace tilecache
