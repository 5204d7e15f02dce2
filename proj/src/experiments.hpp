// Scenario generation and the sweep harness covering the evaluation axes:
// cache size, SBS radius, SBS delay, backhaul delay, Zipf shape and the
// viewport popularity distribution.
#pragma once

#include <string>
#include <vector>

#include "baselines.hpp"

namespace tilecache {

struct GenConfig {
    int num_sbs = 5;
    double sbs_ring_radius_m = 250.0;
    double sbs_radius_m = 300.0;
    double mbs_radius_m = 1000.0;
    double cache_fraction = 0.10;       // of the content library size
    double cache_mbits_override = -1.0; // absolute per-SBS capacity when >= 0
    int num_users = 30;
    // Users are placed inside the union of disks of this radius around the
    // SBSs. Kept fixed (and below the smallest swept coverage radius) so that
    // coverage sweeps change association, never the population itself.
    double user_placement_radius_m = 200.0;
    double sbs_delay_s_per_mbit = 1.0;
    double backhaul_delay_s_per_mbit = 5.0;
    int num_videos = 10;
    int num_gops = 30;
    int num_layers = 2;
    int grid_rows = 3;
    int grid_cols = 4;
    int viewport_rows = 2;
    int viewport_cols = 2;
    double zipf_eta = 1.0;
    ViewportDist viewport_dist = ViewportDist::BiGauss;
    double t_app_s = 1.0;
    double t_disp_s = 1.0;
    uint64_t seed = 1;
    SolverParams solver;
    int softchr_realizations = 1000;
};

GenConfig config_from_json(const std::string& text);
std::string config_to_json(const GenConfig& config);

// Deterministic given the seed: SBSs equally spaced on a ring, users uniform
// inside the union of placement disks, delays and capacities from the config.
Scenario generate_scenario(const GenConfig& config);

enum class SweepAxis { Cache, Radius, SbsDelay, BackhaulDelay, Zipf, Viewport };

SweepAxis sweep_axis_from_name(const std::string& name);
const char* sweep_axis_name(SweepAxis axis);

struct SweepRow {
    std::string scheme;
    std::string axis;
    std::string value;
    uint64_t seed = 0;
    double D = 0.0;
    double chr = 0.0;
    double soft_chr = 0.0;
    double gap = 0.0;
    int iters = 0;
    double time_s = 0.0;
};

struct SweepRequest {
    GenConfig base;
    SweepAxis axis = SweepAxis::Cache;
    std::vector<std::string> values;  // numeric strings, or names for the viewport axis
    std::vector<Scheme> schemes;
    int seeds = 10;
    int jobs = 0;  // 0 = hardware concurrency
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::string csv;          // scheme,axis,value,seed,D,chr,soft_chr,gap,iters,time_s
    std::string summary_csv;  // per (scheme, value): n, mean and standard error columns
};

SweepResult run_sweep(const SweepRequest& request);

// Applies one axis value to a config copy (exposed for tests).
GenConfig apply_axis(const GenConfig& base, SweepAxis axis, const std::string& value);

std::string sweep_csv_header();

}  // namespace tilecache
