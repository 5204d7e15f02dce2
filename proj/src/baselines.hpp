// The four comparison schemes and the proposed one, expressed as transforms of
// the item granularity and the association matrix over the same solver stack.
#pragma once

#include <string>

#include "scheduler.hpp"

namespace tilecache {

enum class Scheme { Proposed, IC, JCL, JCNT, ICNT };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);
// All five, in the order used by reports.
const std::vector<Scheme>& all_schemes();

struct SchemeSetup {
    Scheme scheme = Scheme::Proposed;
    ItemSpace space;
    AssociationMatrix assoc;
};

// Proposed/IC keep the tile-and-layer item space; ICNT/JCNT coarsen to one
// single-tile version per (video, GoP, viewport); JCL keeps layers but a
// single tile. IC and ICNT additionally restrict every user to the nearest
// covering SBS, which makes the per-SBS problems independent.
SchemeSetup transform_scenario(const Scenario& scenario, Scheme scheme);

struct SchemeResult {
    Scheme scheme = Scheme::Proposed;
    SchemeSetup setup;
    FullSolution solution;
    double D = 0.0;
    double chr = 0.0;
    double soft_chr = 0.0;
};

SchemeResult run_scheme(const Scenario& scenario, Scheme scheme, int softchr_realizations = 1000);

}  // namespace tilecache
