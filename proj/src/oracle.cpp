#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace tilecache {

namespace {

double knapsack_rec(const std::vector<KnapsackItem>& items, size_t i, int64_t remaining) {
    if (i == items.size()) return 0.0;
    double best = knapsack_rec(items, i + 1, remaining);
    if (items[i].weight <= remaining)
        best = std::max(best, items[i].profit + knapsack_rec(items, i + 1, remaining - items[i].weight));
    return best;
}

struct GroupCombo {
    double gain = 0.0;
    double w = 0.0;
    int depth = 0;
    std::array<int8_t, kMaxChainDepth> slot{};
};

// Every (depth, source-vector) combination of one group, null first.
void enumerate_group(const PairProblem& prob, const PairGroup& grp, const double* gains,
                     const uint32_t* allowed, std::vector<GroupCombo>& out) {
    out.clear();
    GroupCombo null_combo;
    null_combo.slot.fill(-1);
    out.push_back(null_combo);
    int depth_max = static_cast<int>(grp.item_idx.size());
    std::array<int, kMaxChainDepth> slot_pick{};
    for (int d = 1; d <= depth_max; ++d) {
        slot_pick.fill(-1);
        int level = 0;
        while (level >= 0) {
            if (level == d) {
                GroupCombo c;
                c.depth = d;
                c.slot.fill(-1);
                for (int l = 0; l < d; ++l) {
                    int it = grp.item_idx[l];
                    c.gain += gains[size_t(it) * prob.num_slots + slot_pick[l]];
                    c.w += prob.weight[size_t(it) * prob.num_slots + slot_pick[l]];
                    c.slot[l] = static_cast<int8_t>(slot_pick[l]);
                }
                out.push_back(c);
                --level;
                continue;
            }
            int it = grp.item_idx[level];
            int s = slot_pick[level] + 1;
            while (s < prob.num_slots && !((allowed[it] >> s) & 1u)) ++s;
            if (s >= prob.num_slots) {
                slot_pick[level] = -1;
                --level;
            } else {
                slot_pick[level] = s;
                ++level;
            }
        }
        // A depth is only reachable if every level has at least one source.
        bool reachable = true;
        for (int l = 0; l < d; ++l)
            if ((allowed[grp.item_idx[l]] & ((1u << prob.num_slots) - 1u)) == 0) reachable = false;
        if (!reachable) break;
    }
}

struct RoutingEnumerator {
    const PairProblem& prob;
    double budget;
    std::vector<std::vector<GroupCombo>> combos;
    std::vector<double> suffix_best;
    std::vector<int> pick;
    std::vector<int> best_pick;
    double best_gain = 0.0;
    bool is_root_pos0 = false;

    explicit RoutingEnumerator(const PairProblem& p, const double* gains, const uint32_t* allowed,
                               double budget_s)
        : prob(p), budget(budget_s) {
        // Keep the given group order except that the root group, when present,
        // moves to the front so the dependency resolves along the walk.
        std::vector<int> order;
        if (prob.root_group >= 0) order.push_back(prob.root_group);
        for (size_t gi = 0; gi < prob.groups.size(); ++gi)
            if (static_cast<int>(gi) != prob.root_group) order.push_back(static_cast<int>(gi));
        order_ = order;

        int64_t total = 1;
        combos.resize(order.size());
        for (size_t pos = 0; pos < order.size(); ++pos) {
            enumerate_group(prob, prob.groups[order[pos]], gains, allowed, combos[pos]);
            total *= static_cast<int64_t>(combos[pos].size());
            if (total > kOracleMaxRoutingCombos)
                throw TooLargeError("brute_force_routing: combination count over the bound");
        }
        suffix_best.assign(order.size() + 1, 0.0);
        for (size_t pos = order.size(); pos-- > 0;) {
            double mx = 0.0;
            for (const auto& c : combos[pos]) mx = std::max(mx, c.gain);
            suffix_best[pos] = suffix_best[pos + 1] + mx;
        }
        pick.assign(order.size(), 0);
        best_pick.assign(order.size(), 0);
    }

    void walk(size_t pos, double gain, double w, bool root_delivered) {
        if (pos == combos.size()) {
            if (gain > best_gain) {
                best_gain = gain;
                best_pick = pick;
            }
            return;
        }
        if (gain + suffix_best[pos] <= best_gain) return;  // cannot strictly improve
        bool forced_null = prob.groups[order_[pos]].requires_root && !root_delivered;
        bool is_root = prob.root_group >= 0 && order_[pos] == prob.root_group;
        for (size_t ci = 0; ci < combos[pos].size(); ++ci) {
            const GroupCombo& c = combos[pos][ci];
            if (forced_null && c.depth != 0) continue;
            if (w + c.w > budget + 1e-12) continue;
            pick[pos] = static_cast<int>(ci);
            walk(pos + 1, gain + c.gain, w + c.w,
                 is_root ? c.depth > 0 : root_delivered);
        }
        pick[pos] = 0;
    }

    OraclePairResult result() {
        OraclePairResult res;
        res.gain = best_gain;
        for (size_t pos = 0; pos < combos.size(); ++pos) {
            const GroupCombo& c = combos[pos][best_pick[pos]];
            const PairGroup& grp = prob.groups[order_[pos]];
            for (int l = 0; l < c.depth; ++l) res.deliveries.push_back({grp.item_idx[l], c.slot[l]});
        }
        return res;
    }

    std::vector<int> order_;
};

}  // namespace

double brute_force_knapsack(const std::vector<KnapsackItem>& items, int64_t capacity) {
    if (static_cast<int>(items.size()) > kOracleMaxKnapsackItems)
        throw TooLargeError("brute_force_knapsack: more than " +
                            std::to_string(kOracleMaxKnapsackItems) + " items");
    if (capacity < 0) throw std::invalid_argument("brute_force_knapsack: negative capacity");
    return knapsack_rec(items, 0, capacity);
}

OraclePairResult brute_force_routing(const PairProblem& prob, const double* gains,
                                     const uint32_t* allowed, double budget_s) {
    if (budget_s < 0.0) throw std::invalid_argument("brute_force_routing: negative budget");
    RoutingEnumerator en(prob, gains, allowed, budget_s);
    en.walk(0, 0.0, 0.0, true);
    return en.result();
}

OracleResult brute_force_joint(const ItemSpace& space, const AssociationMatrix& assoc,
                               const Network& net, const std::vector<int64_t>& cache_units,
                               double budget_s) {
    int N = assoc.sbs_count();
    int U = assoc.user_count();
    int vc = space.vlocal_count();
    if (N * vc > kOracleMaxCacheSlots)
        throw TooLargeError("brute_force_joint: more than " +
                            std::to_string(kOracleMaxCacheSlots) + " cacheable item slots");
    if (static_cast<int>(cache_units.size()) != N)
        throw std::invalid_argument("brute_force_joint: one capacity per SBS required");

    // Per-SBS capacity-feasible subsets, in ascending mask order.
    std::vector<std::vector<uint32_t>> feasible(N);
    for (int n = 0; n < N; ++n) {
        for (uint32_t mask = 0; mask < (1u << vc); ++mask) {
            int64_t weight = 0;
            for (int i = 0; i < vc; ++i)
                if ((mask >> i) & 1u) weight += space.size_units[i];
            if (weight <= cache_units[n]) feasible[n].push_back(mask);
        }
    }

    std::vector<PairProblem> pairs = build_pair_problems(space, assoc, net);

    // Memoized exact routing per pair, keyed by the cached-availability bits
    // of the pair's items at its covered SBSs.
    struct PairMemo {
        std::unordered_map<uint64_t, OraclePairResult> table;
    };
    std::vector<PairMemo> memo(pairs.size());

    std::vector<std::vector<double>> gains(pairs.size());
    std::vector<std::vector<uint32_t>> allowed(pairs.size());
    for (size_t p = 0; p < pairs.size(); ++p) {
        const PairProblem& prob = pairs[p];
        gains[p].assign(size_t(prob.num_items()) * prob.num_slots, 0.0);
        for (int i = 0; i < prob.num_items(); ++i)
            for (int s = 0; s < prob.num_slots; ++s)
                gains[p][size_t(i) * prob.num_slots + s] = prob.coefz[i];
        allowed[p].assign(prob.num_items(), 0);
    }

    std::vector<uint32_t> masks(N, 0);
    OracleResult best;
    best.objective = -1.0;

    auto evaluate = [&]() {
        double total = 0.0;
        for (size_t p = 0; p < pairs.size(); ++p) {
            const PairProblem& prob = pairs[p];
            uint64_t key = 0;
            for (int i = 0; i < prob.num_items(); ++i) {
                int vlocal = space.vlocal(prob.v, prob.items[i]);
                uint32_t m = 1u << prob.mbs_slot();
                for (size_t s = 0; s < prob.sources.size(); ++s)
                    if ((masks[prob.sources[s]] >> vlocal) & 1u) m |= 1u << s;
                allowed[p][i] = m;
                key = key * 131 + m;
            }
            auto it = memo[p].table.find(key);
            if (it == memo[p].table.end()) {
                OraclePairResult r =
                    brute_force_routing(pairs[p], gains[p].data(), allowed[p].data(), budget_s);
                it = memo[p].table.emplace(key, std::move(r)).first;
            }
            total += it->second.gain;
        }
        if (total > best.objective) {
            best.objective = total;
            best.x.assign(N, std::vector<uint8_t>(vc, 0));
            for (int n = 0; n < N; ++n)
                for (int i = 0; i < vc; ++i) best.x[n][i] = (masks[n] >> i) & 1u;
            best.y.assign(size_t(U) * vc, -1);
            for (size_t p = 0; p < pairs.size(); ++p) {
                const PairProblem& prob = pairs[p];
                uint64_t key = 0;
                for (int i = 0; i < prob.num_items(); ++i) {
                    int vlocal = space.vlocal(prob.v, prob.items[i]);
                    uint32_t m = 1u << prob.mbs_slot();
                    for (size_t s = 0; s < prob.sources.size(); ++s)
                        if ((masks[prob.sources[s]] >> vlocal) & 1u) m |= 1u << s;
                    key = key * 131 + m;
                }
                const OraclePairResult& r = memo[p].table.at(key);
                for (const PairDelivery& d : r.deliveries) {
                    int vlocal = space.vlocal(prob.v, prob.items[d.item_idx]);
                    int src = d.slot == prob.mbs_slot() ? N : prob.sources[d.slot];
                    best.y[size_t(prob.u) * vc + vlocal] = static_cast<int8_t>(src);
                }
            }
        }
    };

    // Cross product over the per-SBS feasible subsets.
    std::vector<size_t> idx(N, 0);
    for (;;) {
        for (int n = 0; n < N; ++n) masks[n] = feasible[n][idx[n]];
        evaluate();
        int n = 0;
        while (n < N) {
            if (++idx[n] < feasible[n].size()) break;
            idx[n] = 0;
            ++n;
        }
        if (n == N) break;
    }
    // Pair gains are on the raw z*delta scale; report in D units.
    if (space.Delta > 0.0) best.objective /= space.Delta;
    return best;
}

}  // namespace tilecache
