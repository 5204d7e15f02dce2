#include "routing.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace tilecache {

namespace {

constexpr double kBudgetTol = 1e-12;
constexpr double kPruneTol = 1e-12;

struct Choice {
    double gain = 0.0;
    double w = 0.0;
    int64_t bits = 0;
    int depth = 0;
    std::array<int8_t, kMaxChainDepth> slot{};
};

struct GroupState {
    int group = -1;
    std::vector<Choice> choices;  // sorted by gain desc; the null choice is last
    // Convex hull segments of the (weight, gain) points, efficiency-decreasing.
    std::vector<double> seg_dw;
    std::vector<double> seg_dg;
};

struct Segment {
    double eff = 0.0;
    double dw = 0.0;
    double dg = 0.0;
    int order_pos = 0;
    int seg_idx = 0;
};

struct Workspace {
    std::vector<GroupState> groups;
    std::vector<Segment> segments;
    std::vector<int> path;
    std::vector<int> best_path;
    std::vector<double> dp_cur;
    std::vector<double> dp_cond;
};

thread_local Workspace tl_ws;

bool choice_lex_less(const Choice& a, const Choice& b) {
    if (a.depth != b.depth) return a.depth < b.depth;
    for (int l = 0; l < a.depth; ++l)
        if (a.slot[l] != b.slot[l]) return a.slot[l] < b.slot[l];
    return false;
}

// Enumerates all (depth, per-level source) prefixes of one group's chain and
// keeps the weight-dominance frontier. The null choice is always present.
// Bundles with non-positive net gain are dominated by the null choice, so a
// layer with negative gain survives only inside a deeper profitable prefix.
void build_group_choices(const PairProblem& prob, const PairGroup& grp, const double* gains,
                         const uint32_t* allowed, std::vector<Choice>& out) {
    out.clear();
    int depth_max = static_cast<int>(grp.item_idx.size());
    if (depth_max > kMaxChainDepth)
        throw std::invalid_argument("routing: chain depth exceeds the supported maximum");

    struct Opt {
        double w;
        double g;
        int8_t slot;
    };
    std::array<std::vector<Opt>, kMaxChainDepth> cands;
    int feasible_depth = 0;
    for (int l = 0; l < depth_max; ++l) {
        int it = grp.item_idx[l];
        auto& cl = cands[l];
        cl.clear();
        uint32_t mask = allowed[it];
        for (int s = 0; s < prob.num_slots; ++s) {
            if (!((mask >> s) & 1u)) continue;
            cl.push_back({prob.weight[size_t(it) * prob.num_slots + s],
                          gains[size_t(it) * prob.num_slots + s], static_cast<int8_t>(s)});
        }
        if (cl.empty()) break;
        std::sort(cl.begin(), cl.end(), [](const Opt& a, const Opt& b) {
            if (a.w != b.w) return a.w < b.w;
            if (a.g != b.g) return a.g > b.g;
            return a.slot < b.slot;
        });
        size_t keep = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (const Opt& o : cl) {
            if (o.g > best) {
                cl[keep++] = o;
                best = o.g;
            }
        }
        cl.resize(keep);
        feasible_depth = l + 1;
    }

    Choice null_choice;
    null_choice.slot.fill(-1);
    out.push_back(null_choice);

    std::array<size_t, kMaxChainDepth> idx{};
    for (int d = 1; d <= feasible_depth; ++d) {
        idx.fill(0);
        for (;;) {
            Choice c;
            c.depth = d;
            c.slot.fill(-1);
            for (int l = 0; l < d; ++l) {
                const Opt& o = cands[l][idx[l]];
                c.gain += o.g;
                c.w += o.w;
                c.slot[l] = o.slot;
                c.bits += prob.bits[grp.item_idx[l]];
            }
            out.push_back(c);
            int l = 0;
            while (l < d) {
                if (++idx[l] < cands[l].size()) break;
                idx[l] = 0;
                ++l;
            }
            if (l == d) break;
        }
    }

    // Weight-dominance frontier: ascending weight, strictly increasing gain.
    std::sort(out.begin(), out.end(), [](const Choice& a, const Choice& b) {
        if (a.w != b.w) return a.w < b.w;
        if (a.gain != b.gain) return a.gain > b.gain;
        if (a.bits != b.bits) return a.bits < b.bits;
        return choice_lex_less(a, b);
    });
    size_t keep = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (const Choice& c : out) {
        if (c.gain > best || (c.w == 0.0 && c.gain == 0.0 && c.depth == 0)) {
            out[keep++] = c;
            best = std::max(best, c.gain);
        }
    }
    out.resize(keep);
}

void build_hull(GroupState& gs) {
    gs.seg_dw.clear();
    gs.seg_dg.clear();
    // Choices arrive weight-ascending with strictly increasing gains and
    // include (0, 0); build the concave frontier.
    std::vector<std::pair<double, double>> hull;
    for (const Choice& c : gs.choices) {
        std::pair<double, double> p{c.w, c.gain};
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull[hull.size() - 1];
            double s1 = (b.second - a.second) * (p.first - b.first);
            double s2 = (p.second - b.second) * (b.first - a.first);
            if (s2 >= s1)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    for (size_t i = 1; i < hull.size(); ++i) {
        double dw = hull[i].first - hull[i - 1].first;
        double dg = hull[i].second - hull[i - 1].second;
        if (dw <= 0.0 || dg <= 0.0) continue;
        gs.seg_dw.push_back(dw);
        gs.seg_dg.push_back(dg);
    }
}

class BranchAndBound {
public:
    BranchAndBound(const PairProblem& prob, const double* gains, const uint32_t* allowed,
                   double budget)
        : prob_(prob), budget_(budget), ws_(tl_ws) {
        ws_.groups.clear();
        for (size_t gi = 0; gi < prob.groups.size(); ++gi) {
            GroupState gs;
            gs.group = static_cast<int>(gi);
            build_group_choices(prob, prob.groups[gi], gains, allowed, gs.choices);
            build_hull(gs);  // needs the weight-ascending frontier order
            // Sort for the search: best gain first; among equal gains fewer
            // bits, then lower source indices. The first optimum found in
            // this fixed order is the one kept, so the prune below can cut
            // equal-value branches without losing determinism.
            std::sort(gs.choices.begin(), gs.choices.end(), [](const Choice& a, const Choice& b) {
                if (a.gain != b.gain) return a.gain > b.gain;
                if (a.bits != b.bits) return a.bits < b.bits;
                if (a.w != b.w) return a.w < b.w;
                return choice_lex_less(a, b);
            });
            ws_.groups.push_back(std::move(gs));
        }
        order_groups();
        build_segments();
    }

    PairSolution run(double warm_gain) {
        size_t n = ws_.groups.size();
        ws_.path.assign(n, 0);
        ws_.best_path.assign(n, -1);
        best_gain_ = 0.0;
        best_bits_ = 0;
        have_best_ = false;
        // The all-null solution is always feasible; the null choice sorts last
        // within each group (every kept non-null choice has positive gain).
        for (size_t pos = 0; pos < n; ++pos)
            ws_.path[pos] = static_cast<int>(ws_.groups[order_[pos]].choices.size()) - 1;
        record_incumbent(0.0, 0);
        if (warm_gain > 0.0) {
            // Raise the pruning bar just below a known-feasible value; the
            // search still has to reach an actual leaf at or above it.
            best_gain_ = warm_gain - std::max(1e-12, 1e-9 * warm_gain);
            found_leaf_ = false;
        }
        dfs(0, 0.0, 0.0, 0, true);
        if (warm_gain > 0.0 && !found_leaf_) {
            // The bar was never beaten (can only happen through numerical
            // noise); fall back to the cold search.
            best_gain_ = 0.0;
            for (size_t pos = 0; pos < n; ++pos)
                ws_.path[pos] = static_cast<int>(ws_.groups[order_[pos]].choices.size()) - 1;
            record_incumbent(0.0, 0);
            dfs(0, 0.0, 0.0, 0, true);
        }

        PairSolution sol;
        sol.gain = best_gain_;
        for (size_t pos = 0; pos < n; ++pos) {
            const GroupState& gs = ws_.groups[order_[pos]];
            const Choice& c = gs.choices[ws_.best_path[pos]];
            const PairGroup& grp = prob_.groups[gs.group];
            for (int l = 0; l < c.depth; ++l) {
                sol.deliveries.push_back({grp.item_idx[l], c.slot[l]});
                sol.consumed_s += prob_.weight[size_t(grp.item_idx[l]) * prob_.num_slots + c.slot[l]];
                sol.bits += prob_.bits[grp.item_idx[l]];
            }
        }
        std::sort(sol.deliveries.begin(), sol.deliveries.end(),
                  [](const PairDelivery& a, const PairDelivery& b) {
                      if (a.item_idx != b.item_idx) return a.item_idx < b.item_idx;
                      return a.slot < b.slot;
                  });
        return sol;
    }

private:
    void order_groups() {
        size_t n = ws_.groups.size();
        order_.resize(n);
        for (size_t i = 0; i < n; ++i) order_[i] = static_cast<int>(i);
        auto key = [&](int gi) {
            const GroupState& gs = ws_.groups[gi];
            if (gs.seg_dw.empty()) return 0.0;
            return gs.seg_dg[0] / gs.seg_dw[0];
        };
        std::sort(order_.begin(), order_.end(), [&](int a, int b) {
            bool ra = prob_.root_group >= 0 && ws_.groups[a].group == prob_.root_group;
            bool rb = prob_.root_group >= 0 && ws_.groups[b].group == prob_.root_group;
            if (ra != rb) return ra;  // the shared base unit branches first
            double ka = key(a), kb = key(b);
            if (ka != kb) return ka > kb;
            return ws_.groups[a].group < ws_.groups[b].group;
        });
        pos_of_group_.assign(n, 0);
        for (size_t pos = 0; pos < n; ++pos) pos_of_group_[order_[pos]] = static_cast<int>(pos);
    }

    void build_segments() {
        ws_.segments.clear();
        for (size_t i = 0; i < ws_.groups.size(); ++i) {
            const GroupState& gs = ws_.groups[i];
            for (size_t s = 0; s < gs.seg_dw.size(); ++s) {
                Segment seg;
                seg.dw = gs.seg_dw[s];
                seg.dg = gs.seg_dg[s];
                seg.eff = seg.dg / seg.dw;
                seg.order_pos = pos_of_group_[i];
                seg.seg_idx = static_cast<int>(s);
                ws_.segments.push_back(seg);
            }
        }
        std::sort(ws_.segments.begin(), ws_.segments.end(), [](const Segment& a, const Segment& b) {
            if (a.eff != b.eff) return a.eff > b.eff;
            if (a.order_pos != b.order_pos) return a.order_pos < b.order_pos;
            return a.seg_idx < b.seg_idx;
        });
    }

    // LP relaxation value of the groups strictly after `pos` under `rem`.
    double lp_bound(int pos, double rem) const {
        double bound = 0.0;
        for (const Segment& seg : ws_.segments) {
            if (seg.order_pos <= pos) continue;
            if (rem <= 0.0) break;
            if (seg.dw <= rem) {
                bound += seg.dg;
                rem -= seg.dw;
            } else {
                bound += seg.dg * (rem / seg.dw);
                break;
            }
        }
        return bound;
    }

    void record_incumbent(double gain, int64_t bits) {
        best_gain_ = gain;
        best_bits_ = bits;
        std::copy(ws_.path.begin(), ws_.path.end(), ws_.best_path.begin());
        have_best_ = true;
    }

    void dfs(size_t pos, double cur_gain, double cur_w, int64_t cur_bits, bool root_delivered_ok) {
        size_t n = ws_.groups.size();
        if (pos == n) {
            if (!have_best_ || cur_gain > best_gain_) {
                record_incumbent(cur_gain, cur_bits);
                found_leaf_ = true;
            }
            return;
        }
        const GroupState& gs = ws_.groups[order_[pos]];
        const PairGroup& grp = prob_.groups[gs.group];
        bool is_root = prob_.root_group >= 0 && gs.group == prob_.root_group;
        bool forced_null = grp.requires_root && !root_delivered_ok;
        for (size_t ci = 0; ci < gs.choices.size(); ++ci) {
            const Choice& c = gs.choices[ci];
            if (forced_null && c.depth != 0) continue;
            double w = cur_w + c.w;
            if (w > budget_ + kBudgetTol) continue;
            double gain = cur_gain + c.gain;
            if (gain + lp_bound(static_cast<int>(pos), budget_ - w) <= best_gain_ + kPruneTol)
                continue;
            ws_.path[pos] = static_cast<int>(ci);
            bool next_root_ok = root_delivered_ok;
            if (is_root) next_root_ok = c.depth > 0;
            dfs(pos + 1, gain, w, cur_bits + c.bits, next_root_ok);
        }
    }

    const PairProblem& prob_;
    double budget_;
    Workspace& ws_;
    std::vector<int> order_;
    std::vector<int> pos_of_group_;
    double best_gain_ = 0.0;
    int64_t best_bits_ = 0;
    bool have_best_ = false;
    bool found_leaf_ = true;
};

int64_t quantize_exact(double seconds, double quantum) {
    double q = seconds / quantum;
    int64_t units = static_cast<int64_t>(std::llround(q));
    if (std::abs(units * quantum - seconds) > 1e-9)
        throw std::invalid_argument(
            "routing DP: weight or budget is not an exact multiple of the quantum");
    return units;
}

}  // namespace

std::vector<PairProblem> build_pair_problems(const ItemSpace& space,
                                             const AssociationMatrix& assoc, const Network& net) {
    std::vector<PairProblem> out;
    int U = assoc.user_count();
    out.reserve(size_t(U) * space.V);
    for (int u = 0; u < U; ++u) {
        std::vector<int> sources = assoc.covering_sbs(u);
        for (int v = 0; v < space.V; ++v) {
            PairProblem prob;
            prob.u = u;
            prob.v = v;
            prob.sources = sources;
            prob.num_slots = static_cast<int>(sources.size()) + 1;
            if (prob.num_slots > 31)
                throw std::invalid_argument("routing: more than 31 candidate sources per user");

            // Map per-(v,g)-local items with positive demand into the pair.
            std::vector<int> item_of_local(space.per_vg, -1);
            auto add_item = [&](int local) {
                int idx = prob.num_items();
                prob.items.push_back(local);
                item_of_local[local] = idx;
                double size = space.size_mbits[space.vlocal(v, local)];
                for (int s = 0; s < prob.num_slots - 1; ++s)
                    prob.weight.push_back(size * net.sbs_delay[u][sources[s]]);
                prob.weight.push_back(size * net.backhaul_delay[u]);
                prob.bits.push_back(space.size_units[space.vlocal(v, local)]);
                // Raw utility z*delta. The subgradient loop runs on this scale
                // (the printed multiplier constants pair with it); reports
                // divide by Delta to obtain D units.
                prob.coefz.push_back(space.zbar[space.vlocal(v, local)] *
                                     space.delta[space.vlocal(v, local)]);
                return idx;
            };

            if (space.has_root) {
                int base_local = space.local_index(0, 0);
                if (space.zbar[space.vlocal(v, base_local)] > 0.0) {
                    PairGroup root;
                    root.item_idx.push_back(add_item(base_local));
                    prob.groups.push_back(root);
                    prob.root_group = 0;
                    for (int w = 0; w < space.units_per_level[1]; ++w) {
                        PairGroup grp;
                        grp.requires_root = true;
                        for (int l = 1; l < space.chain_len; ++l) {
                            int local = space.local_index(l, w);
                            if (space.zbar[space.vlocal(v, local)] <= 0.0) break;
                            grp.item_idx.push_back(add_item(local));
                        }
                        if (!grp.item_idx.empty()) prob.groups.push_back(grp);
                    }
                }
            } else {
                for (int unit = 0; unit < space.units_per_level[0]; ++unit) {
                    PairGroup grp;
                    for (int l = 0; l < space.chain_len; ++l) {
                        int local = space.local_index(l, unit);
                        if (space.zbar[space.vlocal(v, local)] <= 0.0) break;
                        grp.item_idx.push_back(add_item(local));
                    }
                    if (!grp.item_idx.empty()) prob.groups.push_back(grp);
                }
            }
            out.push_back(std::move(prob));
        }
    }
    return out;
}

PairSolution PairSolver::solve(const PairProblem& prob, const double* gains,
                               const uint32_t* allowed, double budget_s,
                               const PairSolution* warm) {
    if (budget_s < 0.0) throw std::invalid_argument("routing: negative delay budget");
    if (prob.groups.empty()) return {};
    double warm_gain = 0.0;
    if (warm) {
        // Re-price the hinted solution under the current gains; it stays
        // feasible because weights, budget and structure are unchanged. Any
        // disallowed delivery invalidates the hint.
        for (const PairDelivery& d : warm->deliveries) {
            if (!((allowed[d.item_idx] >> d.slot) & 1u)) {
                warm_gain = 0.0;
                break;
            }
            warm_gain += gains[size_t(d.item_idx) * prob.num_slots + d.slot];
        }
    }
    BranchAndBound bb(prob, gains, allowed, budget_s);
    return bb.run(warm_gain);
}

double PairSolver::solve_dp_value(const PairProblem& prob, const double* gains,
                                  const uint32_t* allowed, double budget_s, double quantum_s) {
    if (budget_s < 0.0) throw std::invalid_argument("routing: negative delay budget");
    if (quantum_s <= 0.0) throw std::invalid_argument("routing: quantum must be positive");
    if (prob.groups.empty()) return 0.0;

    int64_t budget_units = quantize_exact(budget_s, quantum_s);
    if (budget_units > 20'000'000) throw std::invalid_argument("routing DP: budget too large");

    Workspace& ws = tl_ws;
    ws.groups.clear();
    for (size_t gi = 0; gi < prob.groups.size(); ++gi) {
        GroupState gs;
        gs.group = static_cast<int>(gi);
        build_group_choices(prob, prob.groups[gi], gains, allowed, gs.choices);
        ws.groups.push_back(std::move(gs));
    }

    size_t width = static_cast<size_t>(budget_units) + 1;
    auto run_over = [&](std::vector<double>& f, const GroupState& gs, int64_t cap_units) {
        // In-place MCKP layer: f'[b] = max over choices of f[b - w_c] + g_c.
        std::vector<double>& prev = ws.dp_cond;
        prev.assign(f.begin(), f.end());
        for (int64_t b = 0; b <= cap_units; ++b) {
            double best = prev[b];  // null choice
            for (const Choice& c : gs.choices) {
                if (c.depth == 0) continue;
                int64_t wu = quantize_exact(c.w, quantum_s);
                if (wu > b) continue;
                best = std::max(best, prev[b - wu] + c.gain);
            }
            f[b] = best;
        }
    };

    double best_value = 0.0;
    if (prob.root_group >= 0) {
        const GroupState* root = nullptr;
        for (const auto& gs : ws.groups)
            if (gs.group == prob.root_group) root = &gs;
        for (const Choice& rc : root->choices) {
            int64_t root_units = quantize_exact(rc.w, quantum_s);
            if (root_units > budget_units) continue;
            int64_t cap = budget_units - root_units;
            std::vector<double> f(static_cast<size_t>(cap) + 1, 0.0);
            for (const auto& gs : ws.groups) {
                if (gs.group == prob.root_group) continue;
                if (prob.groups[gs.group].requires_root && rc.depth == 0) continue;
                run_over(f, gs, cap);
            }
            best_value = std::max(best_value, rc.gain + f[cap]);
        }
    } else {
        std::vector<double> f(width, 0.0);
        for (const auto& gs : ws.groups) run_over(f, gs, budget_units);
        best_value = f[budget_units];
    }
    return best_value;
}

void check_pair_solution(const PairProblem& prob, const double* gains, const uint32_t* allowed,
                         double budget_s, const PairSolution& sol) {
    std::vector<int> level_of(prob.num_items(), -1);
    std::vector<int> group_of(prob.num_items(), -1);
    for (size_t gi = 0; gi < prob.groups.size(); ++gi)
        for (size_t l = 0; l < prob.groups[gi].item_idx.size(); ++l) {
            level_of[prob.groups[gi].item_idx[l]] = static_cast<int>(l);
            group_of[prob.groups[gi].item_idx[l]] = static_cast<int>(gi);
        }

    std::vector<int> delivered_slot(prob.num_items(), -1);
    double consumed = 0.0;
    double gain = 0.0;
    for (const PairDelivery& d : sol.deliveries) {
        if (d.item_idx < 0 || d.item_idx >= prob.num_items() || d.slot < 0 ||
            d.slot >= prob.num_slots)
            throw std::logic_error("routing check: delivery out of range");
        if (delivered_slot[d.item_idx] >= 0)
            throw std::logic_error("routing check: item delivered from two sources");
        if (!((allowed[d.item_idx] >> d.slot) & 1u))
            throw std::logic_error("routing check: delivery from a disallowed source");
        delivered_slot[d.item_idx] = d.slot;
        consumed += prob.weight[size_t(d.item_idx) * prob.num_slots + d.slot];
        gain += gains[size_t(d.item_idx) * prob.num_slots + d.slot];
    }
    if (consumed > budget_s + 1e-9) throw std::logic_error("routing check: delay budget exceeded");
    if (std::abs(gain - sol.gain) > 1e-9 * std::max(1.0, std::abs(sol.gain)))
        throw std::logic_error("routing check: reported gain mismatch");

    for (const auto& grp : prob.groups) {
        bool prefix_broken = false;
        for (size_t l = 0; l < grp.item_idx.size(); ++l) {
            bool got = delivered_slot[grp.item_idx[l]] >= 0;
            if (prefix_broken && got)
                throw std::logic_error("routing check: layer delivered without its prefix");
            if (!got) prefix_broken = true;
        }
        if (grp.requires_root && delivered_slot[grp.item_idx[0]] >= 0) {
            const PairGroup& root = prob.groups[prob.root_group];
            if (delivered_slot[root.item_idx[0]] < 0)
                throw std::logic_error("routing check: enhancement delivered without the base item");
        }
    }
}

LambdaStore::LambdaStore(const ItemSpace& space, const AssociationMatrix& assoc, double lambda0) {
    int U = assoc.user_count();
    slots_.resize(U);
    values_.resize(U);
    positive_.assign(space.vlocal_count(), 0);
    for (int i = 0; i < space.vlocal_count(); ++i) positive_[i] = space.zbar[i] > 0.0 ? 1 : 0;
    for (int u = 0; u < U; ++u) {
        slots_[u] = assoc.covering_sbs(u);
        values_[u].assign(slots_[u].size(), std::vector<double>(space.vlocal_count(), 0.0));
        for (auto& vec : values_[u])
            for (int i = 0; i < space.vlocal_count(); ++i)
                if (positive_[i]) vec[i] = lambda0;
    }
}

int LambdaStore::slot_of(int u, int sbs) const {
    const auto& s = slots_[u];
    for (size_t i = 0; i < s.size(); ++i)
        if (s[i] == sbs) return static_cast<int>(i);
    return -1;
}

double LambdaStore::get(int u, int sbs, int vlocal) const {
    int slot = slot_of(u, sbs);
    return slot < 0 ? 0.0 : values_[u][slot][vlocal];
}

RoutingComponent::RoutingComponent(const ItemSpace& space, const AssociationMatrix& assoc,
                                   const Network& net)
    : space_(&space), mbs_code_(assoc.sbs_count()) {
    pairs_ = build_pair_problems(space, assoc, net);
}

void RoutingComponent::build_gains_relaxed(const PairProblem& prob, const LambdaStore* lambda,
                                           double* gains, uint32_t* allowed) const {
    for (int i = 0; i < prob.num_items(); ++i) {
        int vlocal = space_->vlocal(prob.v, prob.items[i]);
        for (int s = 0; s < prob.num_slots - 1; ++s) {
            double lam = lambda ? lambda->values(prob.u, s)[vlocal] : 0.0;
            gains[size_t(i) * prob.num_slots + s] = prob.coefz[i] - lam;
        }
        gains[size_t(i) * prob.num_slots + prob.mbs_slot()] = prob.coefz[i];
        allowed[i] = (1u << prob.num_slots) - 1u;
    }
}

void RoutingComponent::build_gains_repair(const PairProblem& prob,
                                          const std::vector<std::vector<uint8_t>>& cached,
                                          double* gains, uint32_t* allowed) const {
    for (int i = 0; i < prob.num_items(); ++i) {
        int vlocal = space_->vlocal(prob.v, prob.items[i]);
        uint32_t mask = 1u << prob.mbs_slot();
        for (int s = 0; s < prob.num_slots - 1; ++s) {
            gains[size_t(i) * prob.num_slots + s] = prob.coefz[i];
            if (cached[prob.sources[s]][vlocal]) mask |= 1u << s;
        }
        gains[size_t(i) * prob.num_slots + prob.mbs_slot()] = prob.coefz[i];
        allowed[i] = mask;
    }
}

PairSolution RoutingComponent::solve_pair(const PairProblem& prob, RoutingMode mode,
                                          double budget_s, const LambdaStore* lambda,
                                          const std::vector<std::vector<uint8_t>>* cached,
                                          const PairSolution* warm) const {
    thread_local std::vector<double> gains;
    thread_local std::vector<uint32_t> allowed;
    gains.assign(size_t(prob.num_items()) * prob.num_slots, 0.0);
    allowed.assign(prob.num_items(), 0);
    if (mode == RoutingMode::Relaxed)
        build_gains_relaxed(prob, lambda, gains.data(), allowed.data());
    else {
        if (!cached) throw std::invalid_argument("routing repair mode needs a cache policy");
        build_gains_repair(prob, *cached, gains.data(), allowed.data());
    }
    PairSolution sol = PairSolver::solve(prob, gains.data(), allowed.data(), budget_s, warm);
    check_pair_solution(prob, gains.data(), allowed.data(), budget_s, sol);
    return sol;
}

RoutingOutcome RoutingComponent::solve(RoutingMode mode, double budget_s,
                                       const LambdaStore* lambda,
                                       const std::vector<std::vector<uint8_t>>* cached) const {
    RoutingOutcome out;
    out.y.assign(size_t(space_->U) * space_->vlocal_count(), -1);
    out.pair_consumed.assign(pairs_.size(), 0.0);
    for (size_t p = 0; p < pairs_.size(); ++p) {
        const PairProblem& prob = pairs_[p];
        PairSolution sol = solve_pair(prob, mode, budget_s, lambda, cached);
        out.value += sol.gain;
        out.pair_consumed[p] = sol.consumed_s;
        out.consumed_max_s = std::max(out.consumed_max_s, sol.consumed_s);
        apply_solution(prob, sol, &out.y[size_t(prob.u) * space_->vlocal_count()]);
    }
    return out;
}

void RoutingComponent::apply_solution(const PairProblem& prob, const PairSolution& sol,
                                      int8_t* y_user) const {
    for (const PairDelivery& d : sol.deliveries) {
        int vlocal = space_->vlocal(prob.v, prob.items[d.item_idx]);
        int source = d.slot == prob.mbs_slot() ? mbs_code_ : prob.sources[d.slot];
        y_user[vlocal] = static_cast<int8_t>(source);
    }
}

}  // namespace tilecache
