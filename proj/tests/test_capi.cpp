#include <doctest.h>

#include <cstring>
#include <string>

#include "tilecache.h"

namespace {

struct Str {
    char* ptr = nullptr;
    ~Str() { tc_string_free(ptr); }
    std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

const char* kTinyConfig = R"({
  "num_sbs": 2, "sbs_ring_radius_m": 100, "user_placement_radius_m": 150,
  "num_users": 3, "num_videos": 2, "num_gops": 2, "seed": 5,
  "softchr_realizations": 20
})";

}  // namespace

TEST_CASE("version and status strings") {
    CHECK(tc_version() != nullptr);
    CHECK(std::strcmp(tc_status_name(TC_OK), "ok") == 0);
    CHECK(tc_status_name(TC_ERROR_PARSE) != nullptr);
}

TEST_CASE("scenario generate / serialize / parse round trip") {
    tc_scenario* scenario = nullptr;
    REQUIRE(tc_scenario_generate(kTinyConfig, &scenario) == TC_OK);
    Str json;
    REQUIRE(tc_scenario_to_json(scenario, &json.ptr) == TC_OK);
    CHECK(json.str().find("\"library\"") != std::string::npos);

    tc_scenario* parsed = nullptr;
    REQUIRE(tc_scenario_from_json(json.ptr, &parsed) == TC_OK);
    Str again;
    REQUIRE(tc_scenario_to_json(parsed, &again.ptr) == TC_OK);
    CHECK(json.str() == again.str());

    Str demand;
    REQUIRE(tc_scenario_demand_json(scenario, &demand.ptr) == TC_OK);
    CHECK(demand.str().find("video_pmf") != std::string::npos);

    tc_scenario_free(parsed);
    tc_scenario_free(scenario);
}

TEST_CASE("parse errors set the status and message") {
    tc_scenario* scenario = nullptr;
    CHECK(tc_scenario_from_json("{not json", &scenario) == TC_ERROR_PARSE);
    CHECK(std::string(tc_last_error()).size() > 0);
    CHECK(tc_scenario_generate("{\"viewport\": {\"rows\": 99}}", &scenario) ==
          TC_ERROR_INVALID_ARGUMENT);
    CHECK(tc_scenario_from_json(nullptr, &scenario) == TC_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("solve, metrics, policies, trace and validation") {
    tc_scenario* scenario = nullptr;
    REQUIRE(tc_scenario_generate(kTinyConfig, &scenario) == TC_OK);

    tc_result* result = nullptr;
    REQUIRE(tc_solve(scenario, "proposed", nullptr, &result) == TC_OK);

    double d = 0.0;
    REQUIRE(tc_result_distortion(result, &d) == TC_OK);
    CHECK(d > 0.0);
    CHECK(d <= 1.0 + 1e-12);

    Str metrics;
    REQUIRE(tc_result_metrics_json(result, &metrics.ptr) == TC_OK);
    CHECK(metrics.str().find("\"scheme\": \"proposed\"") != std::string::npos);
    CHECK(metrics.str().find("\"chr\"") != std::string::npos);

    Str trace;
    REQUIRE(tc_result_trace_csv(result, 1, &trace.ptr) == TC_OK);
    CHECK(trace.str().substr(0, 19) == "tau,UB,LB,gap,sigma");

    Str policies;
    REQUIRE(tc_result_policies_json(result, &policies.ptr) == TC_OK);

    Str report;
    int violations = -1;
    REQUIRE(tc_validate_policies(scenario, policies.ptr, &report.ptr, &violations) == TC_OK);
    CHECK(violations == 0);

    CHECK(tc_solve(scenario, "no-such-scheme", nullptr, &result) == TC_ERROR_INVALID_ARGUMENT);

    tc_result_free(result);
    tc_scenario_free(scenario);
}

TEST_CASE("oracle agrees with the solver on a tiny scenario") {
    const char* config = R"({
      "num_sbs": 1, "sbs_ring_radius_m": 1, "user_placement_radius_m": 100,
      "num_users": 2, "num_videos": 2, "num_gops": 1,
      "grid": {"rows": 1, "cols": 2}, "viewport": {"rows": 1, "cols": 2},
      "cache_mbits": 0.3, "seed": 9, "softchr_realizations": 10
    })";
    tc_scenario* scenario = nullptr;
    REQUIRE(tc_scenario_generate(config, &scenario) == TC_OK);

    tc_result* exact = nullptr;
    REQUIRE(tc_oracle_solve(scenario, &exact) == TC_OK);
    double d_exact = 0.0;
    REQUIRE(tc_result_distortion(exact, &d_exact) == TC_OK);

    tc_result* solved = nullptr;
    REQUIRE(tc_solve(scenario, "proposed", nullptr, &solved) == TC_OK);
    double d_solver = 0.0;
    REQUIRE(tc_result_distortion(solved, &d_solver) == TC_OK);

    CHECK(d_solver <= d_exact + 1e-9);
    double tolerance = d_exact > 0 ? 0.01 * d_exact : 0.01;
    CHECK(d_solver >= d_exact - tolerance);

    // The exact policies pass validation too.
    Str policies, report;
    int violations = -1;
    REQUIRE(tc_result_policies_json(exact, &policies.ptr) == TC_OK);
    REQUIRE(tc_validate_policies(scenario, policies.ptr, &report.ptr, &violations) == TC_OK);
    CHECK(violations == 0);

    tc_result_free(solved);
    tc_result_free(exact);
    tc_scenario_free(scenario);
}

TEST_CASE("oracle rejects oversized instances") {
    tc_scenario* scenario = nullptr;
    REQUIRE(tc_scenario_generate("{}", &scenario) == TC_OK);  // the full default scenario
    tc_result* result = nullptr;
    CHECK(tc_oracle_solve(scenario, &result) == TC_ERROR_TOO_LARGE);
    tc_scenario_free(scenario);
}

TEST_CASE("sweep through the C API is deterministic") {
    Str csv1, csv2, summary;
    REQUIRE(tc_sweep(kTinyConfig, "cache", "5,10", "icnt,proposed", 2, 2, &csv1.ptr,
                     &summary.ptr) == TC_OK);
    REQUIRE(tc_sweep(kTinyConfig, "cache", "5,10", "icnt,proposed", 2, 2, &csv2.ptr, nullptr) ==
            TC_OK);
    auto strip_time = [](const std::string& csv) {
        std::string out;
        for (size_t pos = 0; pos < csv.size();) {
            size_t end = csv.find('\n', pos);
            std::string line = csv.substr(pos, end - pos);
            out += line.substr(0, line.rfind(','));
            out += '\n';
            pos = end + 1;
        }
        return out;
    };
    CHECK(strip_time(csv1.str()) == strip_time(csv2.str()));
    CHECK(csv1.str().substr(0, 10) == "scheme,axi");
    CHECK(summary.str().find("d_mean") != std::string::npos);

    Str bad;
    CHECK(tc_sweep(kTinyConfig, "bogus-axis", "1", "all", 1, 1, &bad.ptr, nullptr) ==
          TC_ERROR_INVALID_ARGUMENT);
}
