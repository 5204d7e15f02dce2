#include "lagrangian.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "util.hpp"

namespace tilecache {

double lagrangian_value(const ItemSpace& space, const AssociationMatrix& assoc,
                        const LambdaStore& lambda, const std::vector<std::vector<uint8_t>>& x,
                        const std::vector<int8_t>& y) {
    int U = assoc.user_count();
    int N = assoc.sbs_count();
    int vc = space.vlocal_count();
    double value = 0.0;
    for (int u = 0; u < U; ++u) {
        const int8_t* yu = &y[size_t(u) * vc];
        for (int i = 0; i < vc; ++i) {
            int src = yu[i];
            if (src < 0) continue;
            double coef = space.Delta > 0.0 ? space.zbar[i] * space.delta[i] / space.Delta : 0.0;
            if (src == N) {
                value += coef;
            } else {
                double alpha = assoc.covered(u, src) ? 1.0 : 0.0;
                value += coef * alpha - lambda.get(u, src, i);
            }
        }
    }
    for (int n = 0; n < N; ++n) {
        for (int i = 0; i < vc; ++i) {
            if (!x[n][i]) continue;
            for (int u = 0; u < U; ++u)
                if (assoc.covered(u, n)) value += lambda.get(u, n, i);
        }
    }
    return value;
}

double step_size(double ub, double lb, double phi_norm_sq, double w) {
    if (phi_norm_sq <= 0.0)
        throw std::invalid_argument("step_size: subgradient norm must be positive");
    if (ub < lb) throw std::invalid_argument("step_size: UB must not be below LB");
    return w * (ub - lb) / phi_norm_sq;
}

double duality_gap(double ub, double lb) {
    if (lb > 0.0) return std::abs((ub - lb) / lb);
    return ub - lb;
}

SubproblemSolver::SubproblemSolver(const ItemSpace& space, const AssociationMatrix& assoc,
                                   const Network& net, const SolverParams& params)
    : space_(&space), assoc_(&assoc), params_(params), routing_(space, assoc, net) {
    params_.validate();
    int N = assoc.sbs_count();
    int U = assoc.user_count();
    covers_.assign(N, {});
    for (int u = 0; u < U; ++u) {
        auto covering = assoc.covering_sbs(u);
        for (size_t slot = 0; slot < covering.size(); ++slot)
            covers_[covering[slot]].push_back({u, static_cast<int>(slot)});
    }
    pairs_of_uv_.assign(size_t(U) * space.V, {});
    const auto& pairs = routing_.pairs();
    for (size_t p = 0; p < pairs.size(); ++p)
        pairs_of_uv_[size_t(pairs[p].u) * space.V + pairs[p].v].push_back(static_cast<int>(p));
}

GopSolution SubproblemSolver::solve(const std::vector<int64_t>& cache_units, double budget_s,
                                    GopReport* report) {
    const ItemSpace& space = *space_;
    const AssociationMatrix& assoc = *assoc_;
    int N = assoc.sbs_count();
    int U = assoc.user_count();
    int vc = space.vlocal_count();
    const auto& pairs = routing_.pairs();
    int P = static_cast<int>(pairs.size());

    if (static_cast<int>(cache_units.size()) != N)
        throw std::invalid_argument("solve: one cache budget per SBS required");
    if (budget_s < 0.0) throw std::invalid_argument("solve: negative delay budget");

    LambdaStore lambda(space, assoc, params_.lambda0);
    const auto& zpos = lambda.positive_mask();

    std::vector<std::vector<double>> profits(N, std::vector<double>(vc, 0.0));
    std::vector<std::vector<uint8_t>> x(N, std::vector<uint8_t>(vc, 0));
    std::vector<std::vector<uint8_t>> x_alt(N, std::vector<uint8_t>(vc, 0));
    std::vector<std::vector<double>> alt_profit(N, std::vector<double>(vc, 0.0));
    std::vector<double> sbs_profit(N, 0.0);
    std::vector<uint8_t> sbs_dirty(N, 1);
    std::vector<int> density_order(vc);

    auto used_units_of = [&](const std::vector<uint8_t>& xn) {
        int64_t used = 0;
        for (int i = 0; i < vc; ++i)
            if (xn[i]) used += space.size_units[i];
        return used;
    };

    // Greedy density fill used for the demand-guided primal cache candidate.
    auto greedy_fill = [&](const std::vector<double>& profit, int64_t capacity,
                           std::vector<uint8_t>& out) {
        std::fill(out.begin(), out.end(), 0);
        int count = 0;
        for (int i = 0; i < vc; ++i)
            if (profit[i] > 0.0) density_order[count++] = i;
        std::sort(density_order.begin(), density_order.begin() + count, [&](int a, int b) {
            double da = profit[a] / space.size_units[a];
            double db = profit[b] / space.size_units[b];
            if (da != db) return da > db;
            return a < b;
        });
        int64_t remaining = capacity;
        for (int k = 0; k < count; ++k) {
            int i = density_order[k];
            if (space.size_units[i] <= remaining) {
                out[i] = 1;
                remaining -= space.size_units[i];
            }
        }
    };

    std::vector<double> relaxed_val(P, 0.0);
    std::vector<uint8_t> relaxed_dirty(P, 1);
    std::vector<PairSolution> relaxed_sol(P), repair_warm(P);
    std::vector<int8_t> y_relaxed(size_t(U) * vc, -1);
    std::vector<int8_t> y_repair(size_t(U) * vc, -1);
    long solves_repair_total = 0;

    // Repair results memoized per pair on the cache content visible to the
    // pair; an accidental hash collision can only yield a feasible suboptimal
    // routing (the per-solve checker rejects anything infeasible).
    struct RepairEntry {
        double gain = 0.0;
        double consumed = 0.0;
        std::vector<PairDelivery> deliveries;
    };
    std::vector<std::unordered_map<uint64_t, RepairEntry>> repair_memo(P);
    auto repair_key = [&](const PairProblem& prob, const std::vector<std::vector<uint8_t>>& xx) {
        uint64_t h = 1469598103934665603ULL;
        for (int n : prob.sources) {
            const uint8_t* slice = &xx[n][size_t(prob.v) * space.per_vg];
            for (int i = 0; i < space.per_vg; ++i) {
                h ^= slice[i];
                h *= 1099511628211ULL;
            }
            h ^= 0xabu;
            h *= 1099511628211ULL;
        }
        return h;
    };
    auto repair_pair = [&](int p, const std::vector<std::vector<uint8_t>>& xx) {
        const PairProblem& prob = pairs[p];
        uint64_t key = repair_key(prob, xx);
        auto it = repair_memo[p].find(key);
        if (it == repair_memo[p].end()) {
            PairSolution sol = routing_.solve_pair(
                prob, RoutingMode::Repair, budget_s, nullptr, &xx,
                repair_warm[p].deliveries.empty() ? nullptr : &repair_warm[p]);
            RepairEntry entry{sol.gain, sol.consumed_s, sol.deliveries};
            it = repair_memo[p].emplace(key, std::move(entry)).first;
            repair_warm[p] = std::move(sol);
            ++solves_repair_total;
        }
        return &it->second;
    };
    auto repair_with = [&](const std::vector<std::vector<uint8_t>>& xx,
                           std::vector<const RepairEntry*>& entries) {
        double total = 0.0;
        for (int p = 0; p < P; ++p) {
            entries[p] = repair_pair(p, xx);
            total += entries[p]->gain;
        }
        return total;
    };

    GopSolution best;
    best.x.assign(N, std::vector<uint8_t>(vc, 0));
    best.y.assign(size_t(U) * vc, -1);
    best.pair_consumed.assign(P, 0.0);
    best.used_units.assign(N, 0);
    best.lb = -1.0;  // any feasible repair (including the empty one) replaces this

    // Pair gains and multipliers live on the raw z*delta scale; dividing by
    // Delta converts bounds to D units for reporting and the gap test.
    double norm = space.Delta > 0.0 ? 1.0 / space.Delta : 1.0;

    double ub_best = std::numeric_limits<double>::infinity();
    double lb_best = -std::numeric_limits<double>::infinity();
    double lb_best_raw = -std::numeric_limits<double>::infinity();
    bool converged = false;
    double gap = std::numeric_limits<double>::infinity();
    int tau = 0;
    double w_eff = params_.w;
    int stall = 0;
    int no_progress = 0;

    auto clear_pair_slice = [&](std::vector<int8_t>& y, const PairProblem& prob) {
        int8_t* yu = &y[size_t(prob.u) * vc];
        for (int it : prob.items) yu[space.vlocal(prob.v, it)] = -1;
    };

    // Accept a feasible primal candidate: track the best bound and keep the
    // best (x, y) pair with its bookkeeping.
    auto adopt = [&](const std::vector<std::vector<uint8_t>>& xx,
                     const std::vector<const RepairEntry*>& entries, double lb_raw) {
        if (lb_raw > lb_best_raw) {
            lb_best_raw = lb_raw;
            lb_best = lb_best_raw * norm;
        }
        if (lb_raw * norm <= best.lb) return;
        std::fill(y_repair.begin(), y_repair.end(), -1);
        best.lb = lb_raw * norm;
        best.x = xx;
        for (int p = 0; p < P; ++p) {
            const PairProblem& prob = pairs[p];
            PairSolution sol;
            sol.deliveries = entries[p]->deliveries;
            routing_.apply_solution(prob, sol, &y_repair[size_t(prob.u) * vc]);
            best.pair_consumed[p] = entries[p]->consumed;
        }
        best.y = y_repair;
        for (int n = 0; n < N; ++n) best.used_units[n] = used_units_of(xx[n]);
    };


    // First-improvement single-swap hill climb on one cache policy. Evaluates
    // move deltas over only the (user, video) pairs the move can affect, via
    // the repair memo. Returns the improved feasible value.
    auto polish_cache = [&](std::vector<std::vector<uint8_t>>& xx, double value_raw) {
        thread_local std::vector<double> pair_gain;
        thread_local std::vector<const RepairEntry*> entries;
        entries.assign(P, nullptr);
        value_raw = repair_with(xx, entries);
        pair_gain.assign(P, 0.0);
        for (int p = 0; p < P; ++p) pair_gain[p] = entries[p]->gain;

        thread_local std::vector<int> ins, outs, touched;
        auto eval_touched = [&](int n, int v_in, int v_out) {
            touched.clear();
            for (const auto& [u, slot] : covers_[n]) {
                (void)slot;
                for (int p : pairs_of_uv_[size_t(u) * space.V + v_in]) touched.push_back(p);
                if (v_out >= 0 && v_out != v_in)
                    for (int p : pairs_of_uv_[size_t(u) * space.V + v_out]) touched.push_back(p);
            }
            double delta = 0.0;
            for (int p : touched) delta += repair_pair(p, xx)->gain - pair_gain[p];
            return delta;
        };
        auto commit_touched = [&]() {
            for (int p : touched) pair_gain[p] = repair_pair(p, xx)->gain;
        };

        for (int round = 0; round < 6; ++round) {
            bool improved = false;
            for (int n = 0; n < N; ++n) {
                int64_t rem = cache_units[n] - used_units_of(xx[n]);
                ins.clear();
                outs.clear();
                for (int i = 0; i < vc; ++i) {
                    if (xx[n][i])
                        outs.push_back(i);
                    else if (space.zbar[i] > 0.0)
                        ins.push_back(i);
                }
                auto density = [&](int i) {
                    return space.zbar[i] * space.delta[i] / space.size_units[i];
                };
                std::sort(ins.begin(), ins.end(), [&](int a, int b) {
                    double da = density(a), db = density(b);
                    if (da != db) return da > db;
                    return a < b;
                });
                if (ins.size() > 80) ins.resize(80);
                std::sort(outs.begin(), outs.end(), [&](int a, int b) {
                    double da = density(a), db = density(b);
                    if (da != db) return da < db;
                    return a < b;
                });

                for (int i : ins) {
                    if (space.size_units[i] <= rem) {
                        xx[n][i] = 1;
                        double delta = eval_touched(n, i / space.per_vg, -1);
                        if (delta > 1e-12) {
                            commit_touched();
                            value_raw += delta;
                            rem -= space.size_units[i];
                            improved = true;
                        } else {
                            xx[n][i] = 0;
                        }
                        continue;
                    }
                    for (int j : outs) {
                        if (!xx[n][j]) continue;
                        if (space.size_units[j] + rem < space.size_units[i]) continue;
                        xx[n][j] = 0;
                        xx[n][i] = 1;
                        double delta = eval_touched(n, i / space.per_vg, j / space.per_vg);
                        if (delta > 1e-12) {
                            commit_touched();
                            value_raw += delta;
                            rem += space.size_units[j] - space.size_units[i];
                            improved = true;
                        } else {
                            xx[n][i] = 0;
                            xx[n][j] = 1;
                        }
                        break;
                    }
                }
            }
            if (!improved) break;
        }
        return value_raw;
    };

    auto polish_best = [&]() {
        if (best.lb < 0.0) return;
        thread_local std::vector<std::vector<uint8_t>> xp;
        thread_local std::vector<const RepairEntry*> entries;
        xp = best.x;
        double polished = polish_cache(xp, 0.0);
        entries.assign(P, nullptr);
        repair_with(xp, entries);
        adopt(xp, entries, polished);
    };

    double t_p1 = 0.0, t_relax = 0.0, t_repair = 0.0, t_dual = 0.0;
    long solves_relax = 0;
    auto now = [] { return std::chrono::steady_clock::now(); };
    auto secs = [](auto a, auto b) { return std::chrono::duration<double>(b - a).count(); };

    while (tau < params_.tau_max) {
        ++tau;
        auto t0 = now();

        // Caching component: one knapsack per SBS whose multipliers moved.
        for (int n = 0; n < N; ++n) {
            if (!sbs_dirty[n]) continue;
            auto& pr = profits[n];
            std::fill(pr.begin(), pr.end(), 0.0);
            for (const auto& [u, slot] : covers_[n]) {
                const double* lam = lambda.values(u, slot);
                for (int i = 0; i < vc; ++i) pr[i] += lam[i];
            }
            std::vector<KnapsackItem> items;
            for (int i = 0; i < vc; ++i)
                if (pr[i] > 0.0) items.push_back({i, space.size_units[i], pr[i]});
            KnapsackResult r = solve_01_knapsack(items, cache_units[n]);
            std::fill(x[n].begin(), x[n].end(), 0);
            for (int id : r.selected) x[n][id] = 1;
            sbs_profit[n] = r.profit;
            sbs_dirty[n] = 0;
        }
        double p1_value = 0.0;
        for (int n = 0; n < N; ++n) p1_value += sbs_profit[n];
        auto t1 = now();
        t_p1 += secs(t0, t1);

        // Routing component on the relaxed problem, warm-started from the
        // previous iteration's per-pair optimum.
        for (int p = 0; p < P; ++p) {
            if (!relaxed_dirty[p]) continue;
            const PairProblem& prob = pairs[p];
            PairSolution sol = routing_.solve_pair(prob, RoutingMode::Relaxed, budget_s, &lambda,
                                                   nullptr, tau > 1 ? &relaxed_sol[p] : nullptr);
            relaxed_val[p] = sol.gain;
            clear_pair_slice(y_relaxed, prob);
            routing_.apply_solution(prob, sol, &y_relaxed[size_t(prob.u) * vc]);
            relaxed_sol[p] = std::move(sol);
            relaxed_dirty[p] = 0;
            ++solves_relax;
        }
        double p2_value = 0.0;
        for (int p = 0; p < P; ++p) p2_value += relaxed_val[p];

        double ub_tau = p1_value + p2_value;
        bool ub_improved = std::isinf(ub_best) ||
                           ub_best - ub_tau > 1e-12 * std::max(1.0, std::abs(ub_best));
        if (ub_tau < ub_best) ub_best = ub_tau;
        if (ub_improved) {
            stall = 0;
        } else if (params_.stall_window > 0 && ++stall >= params_.stall_window) {
            // The dual bound has flatlined at this step scale; damp it.
            w_eff = std::max(w_eff * 0.5, 1e-4);
            stall = 0;
        }
        auto t2 = now();
        t_relax += secs(t1, t2);

        // Lower bound: two feasible candidates. The first keeps the caching
        // component's decision (sources restricted to caching SBSs per the
        // coupling constraint); the second fills each cache greedily with the
        // items the relaxed routing actually pulled from that SBS.
        for (int n = 0; n < N; ++n)
            std::fill(alt_profit[n].begin(), alt_profit[n].end(), 0.0);
        for (int u = 0; u < U; ++u) {
            const int8_t* yu = &y_relaxed[size_t(u) * vc];
            for (int i = 0; i < vc; ++i) {
                int src = yu[i];
                if (src >= 0 && src < N) alt_profit[src][i] += space.zbar[i] * space.delta[i];
            }
        }
        for (int n = 0; n < N; ++n) greedy_fill(alt_profit[n], cache_units[n], x_alt[n]);

        thread_local std::vector<const RepairEntry*> entries_p1, entries_alt;
        entries_p1.assign(P, nullptr);
        entries_alt.assign(P, nullptr);
        double lb_p1 = repair_with(x, entries_p1);
        double lb_alt = repair_with(x_alt, entries_alt);
        double lb_tau = std::max(lb_p1, lb_alt);
        auto t3 = now();
        t_repair += secs(t2, t3);

        double lb_before = lb_best_raw;
        adopt(lb_alt > lb_p1 ? x_alt : x, lb_alt > lb_p1 ? entries_alt : entries_p1, lb_tau);
        if (tau % 25 == 0) polish_best();
        bool lb_improved = lb_best_raw > lb_before + 1e-15;

        gap = duality_gap(ub_best * norm, lb_best);
        double sigma = 0.0;
        bool stop = gap < params_.epsilon;
        bool flatlined = false;
        if (ub_improved || lb_improved)
            no_progress = 0;
        else if (!stop && params_.no_progress_window > 0 &&
                 ++no_progress >= params_.no_progress_window) {
            stop = true;  // the loop has flatlined; report the gap as it stands
            flatlined = true;
        }

        bool phi_zero = false;
        double phi_norm_sq = 0.0;
        if (!stop) {
            // Subgradient pass over the sparse multiplier support.
            for (int u = 0; u < U; ++u) {
                const auto& slots = lambda.slots(u);
                const int8_t* yu = &y_relaxed[size_t(u) * vc];
                for (size_t s = 0; s < slots.size(); ++s) {
                    int n = slots[s];
                    for (int i = 0; i < vc; ++i) {
                        if (!zpos[i]) continue;
                        bool xv = x[n][i] != 0;
                        bool yv = yu[i] == n;
                        double phi = params_.paper_subgradient
                                         ? subgradient_coord_paper(true, xv, yv,
                                                                   space.zbar[i] * space.delta[i])
                                         : subgradient_coord(true, xv, yv);
                        phi_norm_sq += phi * phi;
                    }
                }
            }
            if (phi_norm_sq <= 0.0) {
                // Relaxed routing already satisfies the coupling: primal
                // feasible and optimal for the current multipliers.
                stop = true;
                phi_zero = true;
            } else {
                sigma = step_size(ub_best, lb_best_raw, phi_norm_sq, w_eff);
                for (int u = 0; u < U; ++u) {
                    const auto& slots = lambda.slots(u);
                    const int8_t* yu = &y_relaxed[size_t(u) * vc];
                    for (size_t s = 0; s < slots.size(); ++s) {
                        int n = slots[s];
                        double* lam = lambda.values(u, static_cast<int>(s));
                        for (int i = 0; i < vc; ++i) {
                            if (!zpos[i]) continue;
                            bool xv = x[n][i] != 0;
                            bool yv = yu[i] == n;
                            double phi =
                                params_.paper_subgradient
                                    ? subgradient_coord_paper(true, xv, yv,
                                                              space.zbar[i] * space.delta[i])
                                    : subgradient_coord(true, xv, yv);
                            if (phi == 0.0) continue;
                            double next = project_multiplier(lam[i], sigma, phi);
                            if (next != lam[i]) {
                                lam[i] = next;
                                sbs_dirty[n] = 1;
                                for (int p : pairs_of_uv_[size_t(u) * space.V + i / space.per_vg])
                                    relaxed_dirty[p] = 1;
                            }
                        }
                    }
                }
            }
        }

        t_dual += secs(t3, now());
        if (report) report->trace.push_back({tau, ub_best * norm, lb_best, gap, sigma});
        if (stop) {
            converged = !flatlined && (gap < params_.epsilon || phi_zero);
            break;
        }
    }

    if (log_level() >= 2)
        log_debug("  p1=" + fmt_double(t_p1) + "s relax=" + fmt_double(t_relax) + "s (" +
                  std::to_string(solves_relax) + ") repair=" + fmt_double(t_repair) + "s (" +
                  std::to_string(solves_repair_total) + ") dual=" + fmt_double(t_dual) + "s");

    if (!converged) {
        // Last-chance polish before reporting a failed gap.
        polish_best();
        gap = duality_gap(ub_best * norm, lb_best);
        converged = gap < params_.epsilon;
    }

    best.consumed_max_s = 0.0;
    for (int p = 0; p < P; ++p)
        best.consumed_max_s = std::max(best.consumed_max_s, best.pair_consumed[p]);

    if (report) {
        report->iterations = tau;
        report->converged = converged;
        report->ub = ub_best * norm;
        report->lb = lb_best;
        report->gap = duality_gap(ub_best * norm, lb_best);
    }
    return best;
}

}  // namespace tilecache
