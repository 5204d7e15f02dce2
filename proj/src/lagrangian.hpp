// Primal-dual subgradient loop for one per-GoP subproblem: relax the
// delivery-requires-cache coupling, alternate the caching knapsacks and the
// routing component, repair a feasible lower bound each iteration, and update
// the multipliers until the duality gap closes.
#pragma once

#include <cstdint>
#include <vector>

#include "knapsack.hpp"
#include "routing.hpp"

namespace tilecache {

struct IterRow {
    int tau = 0;
    double ub = 0.0;     // best Lagrangian value so far
    double lb = 0.0;     // best feasible objective so far
    double gap = 0.0;
    double sigma = 0.0;  // step applied at this iteration (0 on the last)
};

struct GopReport {
    int gop = 0;
    int iterations = 0;
    bool converged = false;
    double ub = 0.0;
    double lb = 0.0;
    double gap = 0.0;
    std::vector<IterRow> trace;
};

struct GopSolution {
    std::vector<std::vector<uint8_t>> x;  // [n][vlocal]
    std::vector<int8_t> y;                // [u * vlocal_count + vlocal]
    std::vector<double> pair_consumed;    // seconds, aligned with RoutingComponent::pairs()
    std::vector<int64_t> used_units;      // cached kilobits per SBS
    double lb = 0.0;                      // D_g of (x, y)
    double consumed_max_s = 0.0;
};

// Value of the relaxed objective at (lambda, x, y); y need not satisfy the
// coupling constraint.
double lagrangian_value(const ItemSpace& space, const AssociationMatrix& assoc,
                        const LambdaStore& lambda, const std::vector<std::vector<uint8_t>>& x,
                        const std::vector<int8_t>& y);

// Exact gradient coordinate of the relaxed coupling constraint.
inline int subgradient_coord(bool alpha, bool x, bool y) {
    return ((alpha && x) ? 1 : 0) - (y ? 1 : 0);
}

// The printed variant of the subgradient, which scales the caching term by
// z*delta; selectable via SolverParams::paper_subgradient.
inline double subgradient_coord_paper(bool alpha, bool x, bool y, double zdelta) {
    return ((alpha && x) ? zdelta : 0.0) - (y ? 1.0 : 0.0);
}

// sigma = w (UB - LB) / ||phi||^2; requires UB >= LB and ||phi||^2 > 0.
double step_size(double ub, double lb, double phi_norm_sq, double w);

inline double project_multiplier(double lambda, double sigma, double phi) {
    double next = lambda - sigma * phi;
    return next > 0.0 ? next : 0.0;
}

// Relative duality gap, falling back to the absolute gap when LB is not
// positive (the relative test would divide by zero).
double duality_gap(double ub, double lb);

class SubproblemSolver {
public:
    SubproblemSolver(const ItemSpace& space, const AssociationMatrix& assoc, const Network& net,
                     const SolverParams& params);

    GopSolution solve(const std::vector<int64_t>& cache_units, double budget_s,
                      GopReport* report);

    const RoutingComponent& routing() const { return routing_; }

private:
    const ItemSpace* space_;
    const AssociationMatrix* assoc_;
    SolverParams params_;
    RoutingComponent routing_;
    // Per SBS: (user, lambda slot) pairs of the covered users.
    std::vector<std::vector<std::pair<int, int>>> covers_;
    std::vector<std::vector<int>> pairs_of_uv_;  // flat [u * V + v] -> pair index
};

}  // namespace tilecache
