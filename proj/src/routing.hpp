// Routing component: independent per-(user, video) subproblems, each a small
// multiple-choice knapsack over (layer-depth, source) choices per unit under
// the per-GoP delay budget. Solved exactly by depth-first branch and bound
// with an LP-relaxation bound; a budget-quantized DP is the cross-check.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "itemspace.hpp"
#include "model.hpp"

namespace tilecache {

constexpr int kMaxChainDepth = 4;

// One unit's chain of items (levels must be delivered as a prefix).
struct PairGroup {
    std::vector<int> item_idx;  // indices into PairProblem::items, by level
    bool requires_root = false;
};

struct PairProblem {
    int u = 0;
    int v = 0;
    std::vector<int> sources;  // covered SBS indices, ascending
    int num_slots = 1;         // |sources| + 1; the last slot is the MBS
    std::vector<int> items;    // per-(v,g)-local item indices
    std::vector<double> weight;   // [item * num_slots + slot] seconds
    std::vector<int64_t> bits;    // per item, kilobit units
    std::vector<double> coefz;    // z * delta / Delta per item
    std::vector<PairGroup> groups;
    int root_group = -1;

    int num_items() const { return static_cast<int>(items.size()); }
    int mbs_slot() const { return num_slots - 1; }
};

std::vector<PairProblem> build_pair_problems(const ItemSpace& space,
                                             const AssociationMatrix& assoc, const Network& net);

struct PairDelivery {
    int item_idx = 0;  // index into PairProblem::items
    int slot = 0;
};

struct PairSolution {
    double gain = 0.0;
    double consumed_s = 0.0;
    int64_t bits = 0;
    std::vector<PairDelivery> deliveries;
};

class PairSolver {
public:
    // gains: [item * num_slots + slot]; allowed: per-item slot bitmask.
    // warm, when given, is a feasible solution of the same structure (e.g.
    // the previous iteration's optimum) used as the initial incumbent bound.
    static PairSolution solve(const PairProblem& prob, const double* gains,
                              const uint32_t* allowed, double budget_s,
                              const PairSolution* warm = nullptr);

    // Requires every choice weight and the budget to be exact multiples of
    // quantum_s; throws otherwise rather than returning an approximation.
    static double solve_dp_value(const PairProblem& prob, const double* gains,
                                 const uint32_t* allowed, double budget_s, double quantum_s);
};

// Independent re-check of the per-pair constraint system (delay budget, at
// most one source per item, layer-prefix, root dependency, allowed sources).
// Throws std::logic_error on any violation.
void check_pair_solution(const PairProblem& prob, const double* gains, const uint32_t* allowed,
                         double budget_s, const PairSolution& sol);

// Multipliers for the relaxed coupling constraint, stored densely per
// (user, covering SBS, per-(v,g)-local item). Entries exist only where the
// user is covered and the request probability is positive; everything else is
// an implicit zero, which never enters either component.
class LambdaStore {
public:
    LambdaStore() = default;
    LambdaStore(const ItemSpace& space, const AssociationMatrix& assoc, double lambda0);

    const std::vector<int>& slots(int u) const { return slots_[u]; }
    // Dense per-(v,g)-local vector for one (user, slot).
    double* values(int u, int slot) { return values_[u][slot].data(); }
    const double* values(int u, int slot) const { return values_[u][slot].data(); }
    int slot_of(int u, int sbs) const;
    double get(int u, int sbs, int vlocal) const;
    const std::vector<uint8_t>& positive_mask() const { return positive_; }

private:
    std::vector<std::vector<int>> slots_;                        // [u] -> SBS ids
    std::vector<std::vector<std::vector<double>>> values_;       // [u][slot][vlocal]
    std::vector<uint8_t> positive_;                              // zbar > 0 per vlocal
};

enum class RoutingMode { Relaxed, Repair };

struct RoutingOutcome {
    double value = 0.0;
    std::vector<int8_t> y;              // [u * vlocal_count + vlocal] -> SBS id, N for MBS, -1 none
    std::vector<double> pair_consumed;  // seconds per pair
    double consumed_max_s = 0.0;
};

class RoutingComponent {
public:
    RoutingComponent(const ItemSpace& space, const AssociationMatrix& assoc, const Network& net);

    const std::vector<PairProblem>& pairs() const { return pairs_; }
    const ItemSpace& space() const { return *space_; }
    int mbs_code() const { return mbs_code_; }

    void build_gains_relaxed(const PairProblem& prob, const LambdaStore* lambda, double* gains,
                             uint32_t* allowed) const;
    void build_gains_repair(const PairProblem& prob,
                            const std::vector<std::vector<uint8_t>>& cached, double* gains,
                            uint32_t* allowed) const;

    PairSolution solve_pair(const PairProblem& prob, RoutingMode mode, double budget_s,
                            const LambdaStore* lambda,
                            const std::vector<std::vector<uint8_t>>* cached,
                            const PairSolution* warm = nullptr) const;

    // Solves every pair independently and assembles the per-GoP routing slice.
    // Relaxed mode maximizes the lambda-adjusted objective over all covered
    // sources; Repair mode restricts SBS sources to caching SBSs and yields a
    // feasible primal routing for the lower bound.
    RoutingOutcome solve(RoutingMode mode, double budget_s, const LambdaStore* lambda,
                         const std::vector<std::vector<uint8_t>>* cached) const;

    void apply_solution(const PairProblem& prob, const PairSolution& sol, int8_t* y_user) const;

private:
    const ItemSpace* space_;
    int mbs_code_ = 0;
    std::vector<PairProblem> pairs_;
};

}  // namespace tilecache
