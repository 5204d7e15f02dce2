// C API implementation: thin handle/error-code layer over the C++ core.
#include "tilecache.h"

#include <cctype>
#include <cstdlib>
#include <cstring>
#include <json.hpp>
#include <new>
#include <string>

#include "experiments.hpp"
#include "json_io.hpp"
#include "metrics.hpp"
#include "oracle.hpp"

using namespace tilecache;

struct tc_scenario_s {
    Scenario scenario;
};

struct tc_result_s {
    SchemeResult result;
    bool from_oracle = false;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
tc_status guarded(Fn&& fn) {
    try {
        fn();
        return TC_OK;
    } catch (const TooLargeError& e) {
        g_last_error = e.what();
        return TC_ERROR_TOO_LARGE;
    } catch (const nlohmann::json::exception& e) {
        g_last_error = e.what();
        return TC_ERROR_PARSE;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return TC_ERROR_INVALID_ARGUMENT;
    } catch (const std::out_of_range& e) {
        g_last_error = e.what();
        return TC_ERROR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return TC_ERROR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return TC_ERROR_INTERNAL;
    }
}

tc_status require(bool ok, const char* msg) {
    if (ok) return TC_OK;
    g_last_error = msg;
    return TC_ERROR_INVALID_ARGUMENT;
}

void apply_solve_options(Scenario& scenario, int& softchr_realizations, const char* options_json) {
    if (!options_json || !*options_json) return;
    nlohmann::json j = nlohmann::json::parse(options_json);
    scenario.solver.w = j.value("w", scenario.solver.w);
    scenario.solver.epsilon = j.value("epsilon", scenario.solver.epsilon);
    scenario.solver.tau_max = j.value("tau_max", scenario.solver.tau_max);
    scenario.solver.stall_window = j.value("stall_window", scenario.solver.stall_window);
    scenario.solver.no_progress_window =
        j.value("no_progress_window", scenario.solver.no_progress_window);
    scenario.solver.lambda0 = j.value("lambda0", scenario.solver.lambda0);
    if (j.contains("subgradient"))
        scenario.solver.paper_subgradient = j.at("subgradient").get<std::string>() == "paper";
    softchr_realizations = j.value("softchr_realizations", softchr_realizations);
}

}  // namespace

extern "C" {

const char* tc_version(void) { return "0.1.0"; }

const char* tc_status_name(tc_status status) {
    switch (status) {
        case TC_OK: return "ok";
        case TC_ERROR_INVALID_ARGUMENT: return "invalid argument";
        case TC_ERROR_PARSE: return "parse error";
        case TC_ERROR_TOO_LARGE: return "instance too large";
        case TC_ERROR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* tc_last_error(void) { return g_last_error.c_str(); }

void tc_string_free(char* text) { std::free(text); }

tc_status tc_scenario_generate(const char* config_json, tc_scenario** out) {
    if (tc_status s = require(out != nullptr, "tc_scenario_generate: out is null")) return s;
    return guarded([&] {
        GenConfig config = config_from_json(config_json && *config_json ? config_json : "{}");
        auto* handle = new tc_scenario_s{generate_scenario(config)};
        *out = handle;
    });
}

tc_status tc_scenario_from_json(const char* scenario_json, tc_scenario** out) {
    if (tc_status s = require(out && scenario_json, "tc_scenario_from_json: null argument"))
        return s;
    return guarded([&] { *out = new tc_scenario_s{scenario_from_json(scenario_json)}; });
}

tc_status tc_scenario_to_json(const tc_scenario* scenario, char** out_json) {
    if (tc_status s = require(scenario && out_json, "tc_scenario_to_json: null argument")) return s;
    return guarded([&] { *out_json = dup_string(scenario_to_json(scenario->scenario)); });
}

tc_status tc_scenario_demand_json(const tc_scenario* scenario, char** out_json) {
    if (tc_status s = require(scenario && out_json, "tc_scenario_demand_json: null argument"))
        return s;
    return guarded([&] { *out_json = dup_string(demand_to_json(scenario->scenario)); });
}

void tc_scenario_free(tc_scenario* scenario) { delete scenario; }

tc_status tc_solve(const tc_scenario* scenario, const char* scheme, const char* options_json,
                   tc_result** out) {
    if (tc_status s = require(scenario && scheme && out, "tc_solve: null argument")) return s;
    return guarded([&] {
        Scenario local = scenario->scenario;
        int realizations = 1000;
        apply_solve_options(local, realizations, options_json);
        auto* handle = new tc_result_s;
        handle->result = run_scheme(local, scheme_from_name(scheme), realizations);
        *out = handle;
    });
}

tc_status tc_oracle_solve(const tc_scenario* scenario, tc_result** out) {
    if (tc_status s = require(scenario && out, "tc_oracle_solve: null argument")) return s;
    return guarded([&] {
        const Scenario& sc = scenario->scenario;
        SchemeSetup setup = transform_scenario(sc, Scheme::Proposed);
        const ItemSpace& space = setup.space;
        int N = setup.assoc.sbs_count();

        std::vector<int64_t> budgets(N);
        for (int n = 0; n < N; ++n)
            budgets[n] = gop_cache_budget_units(to_size_units(sc.network.cache_capacity_mbits[n]),
                                                space.G, 0);
        double budget_s = gop_delay_budget(sc.t_app_s, sc.t_disp_s, space.G, 0.0);
        OracleResult exact =
            brute_force_joint(space, setup.assoc, sc.network, budgets, budget_s);

        auto* handle = new tc_result_s;
        handle->from_oracle = true;
        handle->result.scheme = Scheme::Proposed;
        handle->result.setup = std::move(setup);
        FullSolution& sol = handle->result.solution;
        sol.cache.cached.assign(N, std::vector<uint8_t>(space.item_count(), 0));
        sol.routing.mbs_code = N;
        sol.routing.source.assign(space.U, std::vector<int8_t>(space.item_count(), -1));
        for (int n = 0; n < N; ++n)
            for (int i = 0; i < space.vlocal_count(); ++i)
                if (exact.x[n][i])
                    sol.cache.cached[n][space.item_id(i / space.per_vg, 0, i % space.per_vg)] = 1;
        for (int u = 0; u < space.U; ++u)
            for (int i = 0; i < space.vlocal_count(); ++i) {
                int8_t src = exact.y[size_t(u) * space.vlocal_count() + i];
                if (src >= 0)
                    sol.routing.source[u][space.item_id(i / space.per_vg, 0, i % space.per_vg)] =
                        src;
            }
        GopReport report;
        report.gop = 0;
        report.iterations = 0;
        report.converged = true;
        report.ub = exact.objective;
        report.lb = exact.objective;
        report.gap = 0.0;
        sol.report.gops.push_back(report);
        sol.report.objective = exact.objective;
        handle->result.D = exact.objective;
        handle->result.chr = 0.0;
        handle->result.soft_chr = 0.0;
        *out = handle;
    });
}

tc_status tc_result_metrics_json(const tc_result* result, char** out_json) {
    if (tc_status s = require(result && out_json, "tc_result_metrics_json: null argument"))
        return s;
    return guarded([&] { *out_json = dup_string(metrics_to_json(result->result)); });
}

tc_status tc_result_policies_json(const tc_result* result, char** out_json) {
    if (tc_status s = require(result && out_json, "tc_result_policies_json: null argument"))
        return s;
    return guarded([&] { *out_json = dup_string(policies_to_json(result->result)); });
}

tc_status tc_result_trace_csv(const tc_result* result, int gop, char** out_csv) {
    if (tc_status s = require(result && out_csv, "tc_result_trace_csv: null argument")) return s;
    return guarded(
        [&] { *out_csv = dup_string(trace_to_csv(result->result.solution.report, gop - 1)); });
}

tc_status tc_result_distortion(const tc_result* result, double* out_d) {
    if (tc_status s = require(result && out_d, "tc_result_distortion: null argument")) return s;
    *out_d = result->result.D;
    return TC_OK;
}

void tc_result_free(tc_result* result) { delete result; }

tc_status tc_validate_policies(const tc_scenario* scenario, const char* policies_json,
                               char** out_report_json, int* out_violation_count) {
    if (tc_status s = require(scenario && policies_json && out_report_json && out_violation_count,
                              "tc_validate_policies: null argument"))
        return s;
    return guarded([&] {
        const Scenario& sc = scenario->scenario;
        nlohmann::json head = nlohmann::json::parse(policies_json);
        Scheme scheme = scheme_from_name(head.at("scheme").get<std::string>());
        SchemeSetup setup = transform_scenario(sc, scheme);
        ParsedPolicies parsed =
            policies_from_json(policies_json, setup.space, setup.assoc.sbs_count());
        std::vector<Violation> violations =
            validate_policies(setup.space, setup.assoc, sc.network, sc.t_app_s, sc.t_disp_s,
                              parsed.cache, parsed.routing);
        *out_report_json = dup_string(violations_to_json(violations));
        *out_violation_count = static_cast<int>(violations.size());
    });
}

tc_status tc_sweep(const char* config_json, const char* axis, const char* values_csv,
                   const char* schemes_csv, int seeds, int jobs, char** out_csv,
                   char** out_summary_csv) {
    if (tc_status s = require(axis && values_csv && schemes_csv && out_csv,
                              "tc_sweep: null argument"))
        return s;
    return guarded([&] {
        SweepRequest request;
        request.base = config_from_json(config_json && *config_json ? config_json : "{}");
        request.axis = sweep_axis_from_name(axis);
        auto split = [](const std::string& text) {
            std::vector<std::string> out;
            std::string cur;
            for (char c : text) {
                if (c == ',') {
                    if (!cur.empty()) out.push_back(cur);
                    cur.clear();
                } else if (!std::isspace(static_cast<unsigned char>(c))) {
                    cur += c;
                }
            }
            if (!cur.empty()) out.push_back(cur);
            return out;
        };
        request.values = split(values_csv);
        std::string schemes(schemes_csv);
        if (schemes == "all") {
            request.schemes = all_schemes();
        } else {
            for (const std::string& name : split(schemes))
                request.schemes.push_back(scheme_from_name(name));
        }
        request.seeds = seeds;
        request.jobs = jobs;
        SweepResult result = run_sweep(request);
        *out_csv = dup_string(result.csv);
        if (out_summary_csv) *out_summary_csv = dup_string(result.summary_csv);
    });
}

}  // extern "C"
