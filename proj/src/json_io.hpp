// JSON (de)serialization of scenarios, policies and metrics. The schema is
// documented in the README; all user-facing indices are 1-based.
#pragma once

#include <string>

#include "baselines.hpp"
#include "metrics.hpp"

namespace tilecache {

std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text);

// Request-probability dump for inspection: per-video pmf, viewport sets and
// the per-(video, layer, tile) z heatmap.
std::string demand_to_json(const Scenario& scenario);

std::string policies_to_json(const SchemeResult& result);

struct ParsedPolicies {
    Scheme scheme = Scheme::Proposed;
    CachePolicy cache;
    RoutingPolicy routing;
};

// Parses policies against the item space they were produced for. Duplicate
// delivery records for one (user, item) violate the single-source constraint
// and are rejected here.
ParsedPolicies policies_from_json(const std::string& text, const ItemSpace& space, int num_sbs);

std::string metrics_to_json(const SchemeResult& result);

std::string violations_to_json(const std::vector<Violation>& violations);

// Convergence trace of one GoP as CSV with columns tau,UB,LB,gap,sigma.
std::string trace_to_csv(const SolveReport& report, int gop_index);

}  // namespace tilecache
