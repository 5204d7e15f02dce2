#include <doctest.h>

#include "baselines.hpp"
#include "experiments.hpp"
#include "metrics.hpp"

using namespace tilecache;

namespace {

GenConfig tiny_config(uint64_t seed = 4) {
    GenConfig c;
    c.num_sbs = 3;
    c.sbs_ring_radius_m = 150.0;
    c.sbs_radius_m = 220.0;
    c.user_placement_radius_m = 150.0;
    c.num_users = 5;
    c.num_videos = 3;
    c.num_gops = 2;
    c.cache_fraction = 0.10;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("scheme names round-trip") {
    for (Scheme s : all_schemes()) CHECK(scheme_from_name(scheme_name(s)) == s);
    CHECK_THROWS_AS(scheme_from_name("bogus"), std::invalid_argument);
}

TEST_CASE("transform: granularity and association per scheme") {
    Scenario sc = generate_scenario(tiny_config());

    SchemeSetup proposed = transform_scenario(sc, Scheme::Proposed);
    CHECK(proposed.space.kind == SpaceKind::Tiled);
    CHECK(proposed.space.per_vg == 24);

    SchemeSetup ic = transform_scenario(sc, Scheme::IC);
    CHECK(ic.space.kind == SpaceKind::Tiled);
    for (int u = 0; u < sc.users.count(); ++u) {
        CHECK(ic.assoc.covering_sbs(u).size() <= 1);
        for (int n = 0; n < 3; ++n)
            if (ic.assoc.covered(u, n)) CHECK(sc.association.covered(u, n));
    }

    SchemeSetup jcnt = transform_scenario(sc, Scheme::JCNT);
    CHECK(jcnt.space.kind == SpaceKind::Versioned);
    CHECK(jcnt.space.per_vg == 6);

    SchemeSetup jcl = transform_scenario(sc, Scheme::JCL);
    CHECK(jcl.space.kind == SpaceKind::Layered);
    CHECK(jcl.space.per_vg == 7);

    // Version size example: whole Hog Rider scene plus one 2x2 viewport.
    size_t i = jcnt.space.vlocal(0, 0);
    CHECK(jcnt.space.size_mbits[i] == doctest::Approx(0.620));
    CHECK(jcnt.space.delta[i] == doctest::Approx(1916.0));
}

TEST_CASE("proposed and IC coincide when nobody is covered twice") {
    GenConfig c = tiny_config(9);
    c.num_sbs = 2;
    c.sbs_ring_radius_m = 400.0;  // far apart:
    c.sbs_radius_m = 250.0;       // disks do not overlap
    c.user_placement_radius_m = 200.0;
    c.num_users = 4;
    c.num_gops = 1;
    Scenario sc = generate_scenario(c);
    for (int u = 0; u < sc.users.count(); ++u)
        REQUIRE(sc.association.covering_sbs(u).size() <= 1);

    SchemeResult proposed = run_scheme(sc, Scheme::Proposed, 50);
    SchemeResult ic = run_scheme(sc, Scheme::IC, 50);
    CHECK(proposed.D == doctest::Approx(ic.D).epsilon(1e-9));
}

TEST_CASE("ICNT with a cache smaller than any version uses only the backhaul") {
    GenConfig c = tiny_config(12);
    c.num_gops = 1;
    c.num_users = 3;
    c.cache_fraction = -1.0;
    c.cache_mbits_override = 0.1;  // smallest version is 0.62 Mbits
    Scenario sc = generate_scenario(c);
    SchemeResult icnt = run_scheme(sc, Scheme::ICNT, 50);
    CHECK(icnt.chr == 0.0);
    for (const auto& row : icnt.solution.routing.source)
        for (int8_t src : row) CHECK((src < 0 || src == icnt.solution.routing.mbs_code));
}

TEST_CASE("every scheme's policies satisfy its own constraint system") {
    Scenario sc = generate_scenario(tiny_config(31));
    for (Scheme scheme : all_schemes()) {
        SchemeResult result = run_scheme(sc, scheme, 50);
        auto violations =
            validate_policies(result.setup.space, result.setup.assoc, sc.network, sc.t_app_s,
                              sc.t_disp_s, result.solution.cache, result.solution.routing);
        for (const auto& v : violations) CAPTURE(v.constraint + " " + v.where);
        CHECK(violations.empty());
    }
}

TEST_CASE("identical nearest-SBS maps give identical IC metrics across radii") {
    // Users sit within 150 m of an SBS, so growing the coverage radius from
    // 200 to 300 m never changes the nearest covering SBS.
    for (double radius : {200.0, 250.0, 300.0}) {
        GenConfig c = tiny_config(77);
        c.num_gops = 1;
        c.sbs_radius_m = radius;
        Scenario sc = generate_scenario(c);
        SchemeSetup ic = transform_scenario(sc, Scheme::IC);
        static std::vector<std::vector<int>> reference;
        std::vector<std::vector<int>> nearest;
        for (int u = 0; u < sc.users.count(); ++u) nearest.push_back(ic.assoc.covering_sbs(u));
        if (radius == 200.0)
            reference = nearest;
        else
            CHECK(nearest == reference);
    }
}
