// Command-line front end. All solver functionality comes through the public
// C API of the shared library; the JSON library is only used to splice CLI
// overrides into config documents.
#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "tilecache.h"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CLI::ValidationError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CLI::ValidationError("cannot write file: " + path);
    out << content;
}

[[noreturn]] void fail(const std::string& what, tc_status status) {
    std::cerr << "error: " << what << ": " << tc_status_name(status) << ": " << tc_last_error()
              << "\n";
    std::exit(1);
}

struct ScenarioHandle {
    tc_scenario* ptr = nullptr;
    ~ScenarioHandle() { tc_scenario_free(ptr); }
};

struct ResultHandle {
    tc_result* ptr = nullptr;
    ~ResultHandle() { tc_result_free(ptr); }
};

struct OwnedString {
    char* ptr = nullptr;
    ~OwnedString() { tc_string_free(ptr); }
    std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

ScenarioHandle load_scenario(const std::string& path) {
    ScenarioHandle scenario;
    tc_status status = tc_scenario_from_json(read_file(path).c_str(), &scenario.ptr);
    if (status != TC_OK) fail("loading scenario", status);
    return scenario;
}

std::string solver_options_json(const std::string& subgradient) {
    if (subgradient.empty()) return "";
    return std::string("{\"subgradient\":\"") + subgradient + "\"}";
}

std::string config_with_seed(const std::string& config_path, bool seed_set, uint64_t seed) {
    nlohmann::json j = config_path.empty() ? nlohmann::json::object()
                                           : nlohmann::json::parse(read_file(config_path));
    if (seed_set) j["seed"] = seed;
    return j.dump();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint tile-and-layer cache placement and request routing for 360-degree video "
                 "over collaborating edge base stations"};
    app.require_subcommand(1);

    std::string config_path, scenario_path, out_path = "-", policies_path, trace_path;
    std::string scheme = "proposed", subgradient, demand_path;
    std::string axis, values = "5,10,15,20,25", schemes = "all", summary_path;
    uint64_t seed = 0;
    bool seed_set = false;
    int seeds = 10, jobs = 0, gop = 1;

    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "override the config seed")->each([&](const std::string&) {
            seed_set = true;
        });
    };

    // generate: config -> scenario JSON
    auto* generate = app.add_subcommand("generate", "generate a scenario from a config");
    generate->add_option("--config", config_path, "generator config JSON");
    generate->add_option("--out", out_path, "output scenario JSON (default stdout)");
    generate->add_option("--demand-out", demand_path, "also dump the request-probability model");
    add_seed(generate);

    // solve: scenario + scheme -> metrics/policies/trace
    auto* solve = app.add_subcommand("solve", "solve one scenario with one scheme");
    solve->add_option("--scenario", scenario_path, "scenario JSON")->required();
    solve->add_option("--scheme", scheme, "proposed|ic|jcl|jcnt|icnt");
    solve->add_option("--out", out_path, "metrics JSON output (default stdout)");
    solve->add_option("--policies", policies_path, "also write the policies JSON");
    solve->add_option("--trace", trace_path, "also write the GoP-1 convergence CSV");
    solve->add_option("--subgradient", subgradient, "exact|paper");

    // sweep: axis x values x schemes x seeds -> CSV
    auto* sweep = app.add_subcommand("sweep", "run one experiment axis to CSV");
    sweep->add_option("--config", config_path, "base config JSON");
    sweep->add_option("--axis", axis, "cache|radius|sbs_delay|backhaul_delay|zipf|viewport")
        ->required();
    sweep->add_option("--values", values, "comma-separated axis values");
    sweep->add_option("--schemes", schemes, "comma-separated schemes or 'all'");
    sweep->add_option("--seeds", seeds, "replicates per point");
    sweep->add_option("--jobs", jobs, "worker threads (0 = auto)");
    sweep->add_option("--out", out_path, "results CSV (default stdout)");
    sweep->add_option("--summary", summary_path, "also write the mean/stderr summary CSV");
    add_seed(sweep);

    // validate: scenario + policies -> violation report
    auto* validate = app.add_subcommand("validate", "check policies against the constraints");
    validate->add_option("--scenario", scenario_path, "scenario JSON")->required();
    validate->add_option("--policies", policies_path, "policies JSON")->required();
    validate->add_option("--out", out_path, "violation report JSON (default stdout)");

    // oracle: tiny scenario -> exact optimum
    auto* oracle = app.add_subcommand("oracle", "brute-force optimum of a tiny scenario");
    oracle->add_option("--scenario", scenario_path, "scenario JSON")->required();
    oracle->add_option("--out", out_path, "metrics JSON output (default stdout)");
    oracle->add_option("--policies", policies_path, "also write the exact policies JSON");

    // trace: scenario -> convergence CSV
    auto* trace = app.add_subcommand("trace", "convergence trace of one GoP");
    trace->add_option("--scenario", scenario_path, "scenario JSON")->required();
    trace->add_option("--scheme", scheme, "proposed|ic|jcl|jcnt|icnt");
    trace->add_option("--gop", gop, "1-based GoP index");
    trace->add_option("--subgradient", subgradient, "exact|paper");
    trace->add_option("--out", out_path, "trace CSV (default stdout)");

    CLI11_PARSE(app, argc, argv);

    if (generate->parsed()) {
        std::string config = config_with_seed(config_path, seed_set, seed);
        ScenarioHandle scenario;
        tc_status status = tc_scenario_generate(config.c_str(), &scenario.ptr);
        if (status != TC_OK) fail("generating scenario", status);
        OwnedString json;
        status = tc_scenario_to_json(scenario.ptr, &json.ptr);
        if (status != TC_OK) fail("serializing scenario", status);
        write_file(out_path, json.str());
        if (!demand_path.empty()) {
            OwnedString demand;
            status = tc_scenario_demand_json(scenario.ptr, &demand.ptr);
            if (status != TC_OK) fail("dumping demand", status);
            write_file(demand_path, demand.str());
        }
    } else if (solve->parsed()) {
        ScenarioHandle scenario = load_scenario(scenario_path);
        ResultHandle result;
        std::string options = solver_options_json(subgradient);
        tc_status status = tc_solve(scenario.ptr, scheme.c_str(),
                                    options.empty() ? nullptr : options.c_str(), &result.ptr);
        if (status != TC_OK) fail("solving", status);
        OwnedString metrics;
        status = tc_result_metrics_json(result.ptr, &metrics.ptr);
        if (status != TC_OK) fail("serializing metrics", status);
        write_file(out_path, metrics.str());
        if (!policies_path.empty()) {
            OwnedString policies;
            status = tc_result_policies_json(result.ptr, &policies.ptr);
            if (status != TC_OK) fail("serializing policies", status);
            write_file(policies_path, policies.str());
        }
        if (!trace_path.empty()) {
            OwnedString csv;
            status = tc_result_trace_csv(result.ptr, 1, &csv.ptr);
            if (status != TC_OK) fail("serializing trace", status);
            write_file(trace_path, csv.str());
        }
    } else if (sweep->parsed()) {
        std::string config = config_with_seed(config_path, seed_set, seed);
        OwnedString csv, summary;
        tc_status status = tc_sweep(config.c_str(), axis.c_str(), values.c_str(), schemes.c_str(),
                                    seeds, jobs, &csv.ptr, &summary.ptr);
        if (status != TC_OK) fail("sweep", status);
        write_file(out_path, csv.str());
        if (!summary_path.empty()) write_file(summary_path, summary.str());
    } else if (validate->parsed()) {
        ScenarioHandle scenario = load_scenario(scenario_path);
        OwnedString report;
        int count = 0;
        tc_status status = tc_validate_policies(scenario.ptr, read_file(policies_path).c_str(),
                                                &report.ptr, &count);
        if (status != TC_OK) fail("validating", status);
        write_file(out_path, report.str());
        if (count > 0) {
            std::cerr << count << " constraint violation(s)\n";
            return 1;
        }
    } else if (oracle->parsed()) {
        ScenarioHandle scenario = load_scenario(scenario_path);
        ResultHandle result;
        tc_status status = tc_oracle_solve(scenario.ptr, &result.ptr);
        if (status != TC_OK) fail("oracle", status);
        OwnedString metrics;
        status = tc_result_metrics_json(result.ptr, &metrics.ptr);
        if (status != TC_OK) fail("serializing metrics", status);
        write_file(out_path, metrics.str());
        if (!policies_path.empty()) {
            OwnedString policies;
            status = tc_result_policies_json(result.ptr, &policies.ptr);
            if (status != TC_OK) fail("serializing policies", status);
            write_file(policies_path, policies.str());
        }
    } else if (trace->parsed()) {
        ScenarioHandle scenario = load_scenario(scenario_path);
        ResultHandle result;
        std::string options = solver_options_json(subgradient);
        tc_status status = tc_solve(scenario.ptr, scheme.c_str(),
                                    options.empty() ? nullptr : options.c_str(), &result.ptr);
        if (status != TC_OK) fail("solving", status);
        OwnedString csv;
        status = tc_result_trace_csv(result.ptr, gop, &csv.ptr);
        if (status != TC_OK) fail("serializing trace", status);
        write_file(out_path, csv.str());
    }
    return 0;
}
