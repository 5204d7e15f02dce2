#include "baselines.hpp"

#include <stdexcept>

#include "metrics.hpp"

namespace tilecache {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Proposed: return "proposed";
        case Scheme::IC: return "ic";
        case Scheme::JCL: return "jcl";
        case Scheme::JCNT: return "jcnt";
        case Scheme::ICNT: return "icnt";
    }
    return "proposed";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "proposed") return Scheme::Proposed;
    if (name == "ic") return Scheme::IC;
    if (name == "jcl") return Scheme::JCL;
    if (name == "jcnt") return Scheme::JCNT;
    if (name == "icnt") return Scheme::ICNT;
    throw std::invalid_argument("unknown scheme '" + name +
                                "' (expected proposed, ic, jcl, jcnt or icnt)");
}

const std::vector<Scheme>& all_schemes() {
    static const std::vector<Scheme> schemes = {Scheme::Proposed, Scheme::IC, Scheme::JCL,
                                                Scheme::JCNT, Scheme::ICNT};
    return schemes;
}

SchemeSetup transform_scenario(const Scenario& scenario, Scheme scheme) {
    SchemeSetup setup;
    setup.scheme = scheme;

    std::vector<double> video_pmf = zipf_pmf(scenario.library.num_videos, scenario.zipf_eta);
    auto per_video = viewport_pmfs(scenario.viewport_dist, scenario.library, scenario.seed);
    DemandModel dm =
        build_demand(scenario.library, scenario.users.count(), video_pmf, per_video);

    switch (scheme) {
        case Scheme::Proposed:
        case Scheme::IC:
            setup.space = make_tiled_space(scenario.library, dm);
            break;
        case Scheme::JCL:
            setup.space = make_layered_space(scenario.library, dm);
            break;
        case Scheme::JCNT:
        case Scheme::ICNT:
            setup.space = make_versioned_space(scenario.library, dm);
            break;
    }

    if (scheme == Scheme::IC || scheme == Scheme::ICNT)
        setup.assoc = restrict_to_nearest(scenario.association, scenario.network, scenario.users);
    else
        setup.assoc = scenario.association;
    return setup;
}

SchemeResult run_scheme(const Scenario& scenario, Scheme scheme, int softchr_realizations) {
    SchemeResult result;
    result.scheme = scheme;
    result.setup = transform_scenario(scenario, scheme);

    // With the nearest-SBS association the joint solve decomposes exactly into
    // the per-SBS independent problems: no user couples two SBSs and the cache
    // constraints are already per SBS.
    result.solution = solve_full(result.setup.space, result.setup.assoc, scenario.network,
                                 scenario.t_app_s, scenario.t_disp_s, scenario.solver);

    result.D = distortion_reduction(result.setup.space, result.setup.assoc,
                                    result.solution.routing);
    result.chr = cache_hit_ratio(result.setup.space, result.solution.routing);
    result.soft_chr = soft_cache_hit_ratio(result.setup.space, result.solution.routing,
                                           scenario.seed, softchr_realizations);
    return result;
}

}  // namespace tilecache
